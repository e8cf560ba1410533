use super::{BinaryLinearCode, BitMatrix, BitVector};
use crate::error::CodeError;
use crate::games::RandomStream;

/// Containment check shared by the two pair kinds.
pub trait CodePair {
    /// True iff the pair's containment invariants hold, checked by the
    /// syndrome of every relevant generator row.
    fn verify_nesting(&self) -> bool;
}

/// Rows of `extra` that extend the span of `base`, in order.
fn extend_basis(base: &BitMatrix, extra: &BitMatrix) -> BitMatrix {
    let mut acc = base.clone();
    let mut picked = BitMatrix::empty(base.n_cols());
    let mut rank = acc.rank();
    for r in extra.rows() {
        let single = BitMatrix::new(vec![r.clone()], base.n_cols()).expect("same width");
        let candidate = acc.stack(&single).expect("same width");
        let next = candidate.rank();
        if next > rank {
            acc = candidate;
            picked = picked.stack(&single).expect("same width");
            rank = next;
        }
    }
    picked
}

/// `{0} ⊂ C2 ⊂ C1` for CSS-style key extraction.
#[derive(Debug, Clone)]
pub struct NestedCodePair {
    c1: BinaryLinearCode,
    c2: BinaryLinearCode,
    /// `[R; G2]`: `R` completes a basis of C2 to one of C1.
    quotient_basis: BitMatrix,
}

impl NestedCodePair {
    pub fn new(c1: BinaryLinearCode, c2: BinaryLinearCode) -> Result<Self, CodeError> {
        let pair = Self::unchecked(c1, c2)?;
        if !pair.verify_nesting() {
            return Err(CodeError::Containment("C2 must be a proper subcode of C1"));
        }
        Ok(pair)
    }

    /// Builds the pair without checking containment, so that
    /// [`verify_nesting`](CodePair::verify_nesting) can be queried.
    pub fn unchecked(c1: BinaryLinearCode, c2: BinaryLinearCode) -> Result<Self, CodeError> {
        if c1.n() != c2.n() {
            return Err(CodeError::BlockLength(c1.n(), c2.n()));
        }
        let ext = extend_basis(c2.generator(), c1.generator());
        let quotient_basis = ext.stack(c2.generator())?;
        Ok(NestedCodePair {
            c1,
            c2,
            quotient_basis,
        })
    }

    /// C1 = Hamming[7,4], C2 = repetition {0⁷, 1⁷}: 3 key bits per block.
    pub fn toy() -> Self {
        Self::new(BinaryLinearCode::hamming_7_4(), BinaryLinearCode::repetition(7))
            .expect("repetition code lies inside Hamming[7,4]")
    }

    pub fn c1(&self) -> &BinaryLinearCode {
        &self.c1
    }

    pub fn c2(&self) -> &BinaryLinearCode {
        &self.c2
    }

    pub fn n(&self) -> usize {
        self.c1.n()
    }

    /// Key bits per block, `k1 - k2`.
    pub fn key_len(&self) -> usize {
        self.c1.k() - self.c2.k()
    }

    /// Canonical `(k1-k2)`-bit label of the coset `u + C2` inside C1.
    pub fn key_from_coset(&self, u: &BitVector) -> Result<BitVector, CodeError> {
        u.check_len(self.n())?;
        if !self.c1.is_codeword(u)? {
            return Err(CodeError::NotACodeword);
        }
        let coeffs = self.quotient_basis.transpose().solve(u)?;
        Ok(coeffs.slice(0, self.key_len()))
    }
}

impl CodePair for NestedCodePair {
    fn verify_nesting(&self) -> bool {
        self.c2.k() < self.c1.k()
            && self.c2.k() > 0
            && self
                .c2
                .generator()
                .rows()
                .iter()
                .all(|r| self.c1.is_codeword(r).unwrap_or(false))
    }
}

/// Code pair with `C2⊥ ⊂ C1`, used by uncloneable encryption.
#[derive(Debug, Clone)]
pub struct DualContainingPair {
    c1: BinaryLinearCode,
    c2: BinaryLinearCode,
    /// Rows spanning C2 modulo C1⊥ (`k1 + k2 - n` of them).
    quotient_checks: BitMatrix,
    /// `[H1; Q]`, the stacked constraint system for encoding.
    stacked: BitMatrix,
    nullspace: Vec<BitVector>,
}

impl DualContainingPair {
    pub fn new(c1: BinaryLinearCode, c2: BinaryLinearCode) -> Result<Self, CodeError> {
        let pair = Self::unchecked(c1, c2)?;
        if !pair.verify_nesting() {
            return Err(CodeError::Containment("C2⊥ must be contained in C1"));
        }
        Ok(pair)
    }

    pub fn unchecked(c1: BinaryLinearCode, c2: BinaryLinearCode) -> Result<Self, CodeError> {
        if c1.n() != c2.n() {
            return Err(CodeError::BlockLength(c1.n(), c2.n()));
        }
        let quotient_checks = extend_basis(c1.parity_check(), c2.generator());
        let stacked = c1.parity_check().stack(&quotient_checks)?;
        let nullspace = stacked.nullspace();
        Ok(DualContainingPair {
            c1,
            c2,
            quotient_checks,
            stacked,
            nullspace,
        })
    }

    /// C1 = C2 = Hamming[7,4]: one payload bit per 7-bit block.
    pub fn toy() -> Self {
        let h = BinaryLinearCode::hamming_7_4();
        Self::new(h.clone(), h).expect("Hamming[7,4] contains its simplex dual")
    }

    pub fn c1(&self) -> &BinaryLinearCode {
        &self.c1
    }

    pub fn c2(&self) -> &BinaryLinearCode {
        &self.c2
    }

    pub fn n(&self) -> usize {
        self.c1.n()
    }

    pub fn quotient_checks(&self) -> &BitMatrix {
        &self.quotient_checks
    }

    /// Payload bits per block, `k1 + k2 - n`.
    pub fn payload_len(&self) -> usize {
        self.quotient_checks.n_rows()
    }

    pub fn syndrome_len(&self) -> usize {
        self.c1.n() - self.c1.k()
    }

    /// Uniform `z` with `H1 z = c1_syn` and `Q z = y`: a particular solution
    /// plus a uniform element of the solution space's kernel (one draw per
    /// kernel basis vector).
    pub fn encode_ue_codeword(
        &self,
        c1_syn: &BitVector,
        y: &BitVector,
        rng: &mut RandomStream,
    ) -> Result<BitVector, CodeError> {
        c1_syn.check_len(self.syndrome_len())?;
        y.check_len(self.payload_len())?;
        let mut z = self.stacked.solve(&c1_syn.concat(y))?;
        for basis in &self.nullspace {
            if rng.bit() {
                z = &z ^ basis;
            }
        }
        Ok(z)
    }

    /// Corrects `received` to the C1 coset with syndrome `c1_syn`, then reads
    /// the quotient checks.
    pub fn decode_ue_codeword(
        &self,
        c1_syn: &BitVector,
        received: &BitVector,
    ) -> Result<BitVector, CodeError> {
        c1_syn.check_len(self.syndrome_len())?;
        let err_syn = self.c1.syndrome(received)?.xor(c1_syn)?;
        let z = received.xor(&self.c1.coset_leader(&err_syn)?)?;
        self.quotient_checks.mul_vec(&z)
    }

    pub fn kernel_dimension(&self) -> usize {
        self.nullspace.len()
    }
}

impl CodePair for DualContainingPair {
    fn verify_nesting(&self) -> bool {
        let dual_inside = self
            .c2
            .parity_check()
            .rows()
            .iter()
            .all(|r| self.c1.is_codeword(r).unwrap_or(false));
        let q_ok = self.quotient_checks.n_rows() + self.c1.n() == self.c1.k() + self.c2.k()
            && self.quotient_checks.rows().iter().all(|r| {
                self.c2.is_codeword(r).unwrap_or(false)
                    && !self.c1.parity_check().spans(r).unwrap_or(true)
            });
        dual_inside && q_ok
    }
}
