use std::sync::{Arc, OnceLock};

use super::{BitMatrix, BitVector};
use crate::error::CodeError;
use crate::games::RandomStream;

/// Largest block length for which exhaustive coset-leader tables are built.
pub const MAX_TABLE_LENGTH: usize = 20;
const MAX_DISTANCE_DIM: usize = 16;

/// Binary linear code `C[n, k]` with generator and parity-check matrices.
#[derive(Clone)]
pub struct BinaryLinearCode {
    n: usize,
    k: usize,
    generator: BitMatrix,
    parity_check: BitMatrix,
    min_distance: Option<usize>,
    leaders: Arc<OnceLock<Vec<BitVector>>>,
}

impl PartialEq for BinaryLinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
    }
}

impl std::fmt::Debug for BinaryLinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BinaryLinearCode[{}, {}", self.n, self.k)?;
        if let Some(d) = self.min_distance {
            write!(f, ", {d}")?;
        }
        write!(f, "]")
    }
}

impl BinaryLinearCode {
    /// Builds a code from a full-rank generator (rows are basis codewords).
    pub fn from_generator(generator: BitMatrix) -> Result<Self, CodeError> {
        let n = generator.n_cols();
        let k = generator.n_rows();
        let rank = generator.rank();
        if rank != k {
            return Err(CodeError::RankDeficient { rank, rows: k });
        }
        let parity_check = BitMatrix::new(generator.nullspace(), n)?;
        let min_distance = (k <= MAX_DISTANCE_DIM).then(|| {
            (1u64..1 << k)
                .map(|m| {
                    generator
                        .combine_rows(&BitVector::from_u64(m, k))
                        .expect("message length matches")
                        .weight()
                })
                .min()
                .unwrap_or(0)
        });
        Ok(BinaryLinearCode {
            n,
            k,
            generator,
            parity_check,
            min_distance: if k == 0 { None } else { min_distance },
            leaders: Arc::new(OnceLock::new()),
        })
    }

    pub fn from_rows(rows: &[&str]) -> Result<Self, CodeError> {
        let rows = rows
            .iter()
            .map(|r| r.parse())
            .collect::<Result<Vec<BitVector>, _>>()?;
        let n = rows.first().map_or(0, BitVector::len);
        Self::from_generator(BitMatrix::new(rows, n)?)
    }

    /// Hamming[7,4], distance 3.
    pub fn hamming_7_4() -> Self {
        Self::from_rows(&["1000110", "0100101", "0010011", "0001111"])
            .expect("Hamming generator is full rank")
    }

    /// Repetition code `{0ⁿ, 1ⁿ}`.
    pub fn repetition(n: usize) -> Self {
        Self::from_generator(BitMatrix::new(vec![BitVector::ones(n)], n).expect("row length n"))
            .expect("single nonzero row")
    }

    /// All of `F₂ⁿ`.
    pub fn full_space(n: usize) -> Self {
        let rows = (0..n).map(|i| BitVector::indicator(n, [i])).collect();
        Self::from_generator(BitMatrix::new(rows, n).expect("row length n")).expect("identity")
    }

    /// Dual code `C⊥`, generated by this code's parity checks.
    pub fn dual(&self) -> Self {
        Self::from_generator(self.parity_check.clone()).expect("parity check is full rank")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    pub fn min_distance(&self) -> Option<usize> {
        self.min_distance
    }

    /// Guaranteed correctable weight `⌊(d-1)/2⌋`.
    pub fn correctable_weight(&self) -> usize {
        self.min_distance.map_or(0, |d| d.saturating_sub(1) / 2)
    }

    /// `H · v`, length `n - k`.
    pub fn syndrome(&self, v: &BitVector) -> Result<BitVector, CodeError> {
        self.parity_check.mul_vec(v)
    }

    pub fn is_codeword(&self, v: &BitVector) -> Result<bool, CodeError> {
        Ok(self.syndrome(v)?.is_zero())
    }

    /// `mᵀ G`.
    pub fn encode(&self, message: &BitVector) -> Result<BitVector, CodeError> {
        self.generator.combine_rows(message)
    }

    /// Uniform codeword: `k` uniform message bits pushed through `G`.
    pub fn sample_codeword(&self, rng: &mut RandomStream) -> BitVector {
        self.encode(&BitVector::random(self.k, rng))
            .expect("message length matches")
    }

    fn leader_table(&self) -> Result<&[BitVector], CodeError> {
        if self.n > MAX_TABLE_LENGTH {
            return Err(CodeError::TooLarge(self.n));
        }
        Ok(self.leaders.get_or_init(|| {
            let r = self.n - self.k;
            let mut table: Vec<Option<BitVector>> = vec![None; 1 << r];
            let mut filled = 0;
            // weight-major, then lexicographic (bit 0 most significant)
            'outer: for w in 0..=self.n {
                for word in 0u64..1 << self.n {
                    if word.count_ones() as usize != w {
                        continue;
                    }
                    let v = BitVector::from_u64(word, self.n);
                    let s = self.syndrome(&v).expect("length n").to_u64() as usize;
                    if table[s].is_none() {
                        table[s] = Some(v);
                        filled += 1;
                        if filled == table.len() {
                            break 'outer;
                        }
                    }
                }
            }
            table
                .into_iter()
                .map(|l| l.expect("every syndrome has a coset"))
                .collect()
        }))
    }

    /// Minimum-weight vector with syndrome `syn`, lexicographically first on ties.
    pub fn coset_leader(&self, syn: &BitVector) -> Result<BitVector, CodeError> {
        syn.check_len(self.n - self.k)?;
        let table = self.leader_table()?;
        Ok(table[syn.to_u64() as usize].clone())
    }

    /// Nearest codeword in Hamming distance (coset-leader decoding).
    pub fn decode_to_codeword(&self, word: &BitVector) -> Result<BitVector, CodeError> {
        word.check_len(self.n)?;
        let leader = self.coset_leader(&self.syndrome(word)?)?;
        word.xor(&leader)
    }

    /// All `2^k` codewords in message order; intended for small codes.
    pub fn codewords(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0u64..1 << self.k).map(move |m| {
            self.encode(&BitVector::from_u64(m, self.k))
                .expect("message length matches")
        })
    }

    /// Parses the text format: an `n k` header followed by `k` rows of 0/1
    /// characters. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| CodeError::Parse("missing `n k` header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| CodeError::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_, _>>()?;
        let [n, k] = dims[..] else {
            return Err(CodeError::Parse(format!("header must be `n k`, got {header:?}")));
        };
        let rows = lines
            .map(str::parse::<BitVector>)
            .collect::<Result<Vec<_>, _>>()?;
        if rows.len() != k {
            return Err(CodeError::Parse(format!("expected {k} generator rows, got {}", rows.len())));
        }
        Self::from_generator(BitMatrix::new(rows, n)?)
    }

    /// Inverse of [`parse`](Self::parse).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for r in self.generator.rows() {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}
