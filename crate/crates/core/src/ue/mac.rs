use crate::error::ProtocolError;
use crate::gf2::BitVector;

/// Largest supported tag length.
pub const MAX_TAG_BITS: usize = 32;

/// One-time polynomial-evaluation MAC over GF(2^s).
///
/// The `2s`-bit key is split into an evaluation point `r` (first half) and
/// a mask `t` (second half). The message is cut into `s`-bit blocks
/// `c_1..c_L` (last block zero-padded), followed by a block holding the
/// message length mod 2^s. The tag is
///
/// ```text
/// tag = c_1·r^(L+1) + c_2·r^L + … + c_L·r^2 + len·r + t
/// ```
///
/// so the all-zero key tags every message as zero. Two distinct messages
/// collide under a uniform key with probability at most `(L+1)/2^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacScheme {
    s: usize,
    /// Irreducible modulus with the `x^s` term included.
    modulus: u64,
}

impl MacScheme {
    pub fn new(s: usize) -> Result<Self, ProtocolError> {
        if s == 0 || s > MAX_TAG_BITS {
            return Err(ProtocolError::InvalidConfig(format!(
                "MAC length must be in 1..={MAX_TAG_BITS}, got {s}"
            )));
        }
        Ok(MacScheme {
            s,
            modulus: smallest_irreducible(s),
        })
    }

    pub fn tag_len(&self) -> usize {
        self.s
    }

    pub fn key_len(&self) -> usize {
        2 * self.s
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of polynomial coefficients for an `m_len`-bit message.
    pub fn blocks(&self, m_len: usize) -> usize {
        m_len.div_ceil(self.s) + 1
    }

    pub fn tag(&self, key: &BitVector, m: &BitVector) -> Result<BitVector, ProtocolError> {
        key.check_len(self.key_len())?;
        let r = key.slice(0, self.s).to_u64();
        let t = key.slice(self.s, self.s).to_u64();
        let mut coeffs: Vec<u64> = m
            .iter()
            .collect::<Vec<bool>>()
            .chunks(self.s)
            .map(|c| {
                let mut v = 0u64;
                for i in 0..self.s {
                    v = v << 1 | u64::from(c.get(i).copied().unwrap_or(false));
                }
                v
            })
            .collect();
        coeffs.push(m.len() as u64 & self.mask());
        let mut acc = 0u64;
        for c in coeffs {
            acc = self.mul(acc ^ c, r);
        }
        Ok(BitVector::from_u64(acc ^ t, self.s))
    }

    pub fn verify(&self, key: &BitVector, m: &BitVector, tag: &BitVector) -> Result<bool, ProtocolError> {
        Ok(self.tag(key, m)? == *tag)
    }

    fn mask(&self) -> u64 {
        (1u64 << self.s) - 1
    }

    /// Field product modulo the irreducible modulus.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        poly_mod(clmul(a, b), self.modulus)
    }
}

fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    for i in 0..64 {
        if b >> i & 1 == 1 {
            acc ^= (a as u128) << i;
        }
    }
    acc
}

fn degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u128, m: u64) -> u64 {
    let m = m as u128;
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a as u64
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a as u128, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `f` of degree `d` is irreducible iff
/// `gcd(f, x^(2^i) - x) = 1` for every `1 ≤ i ≤ d/2`.
fn is_irreducible(f: u64) -> bool {
    let d = degree(f as u128);
    if d < 1 {
        return false;
    }
    let mut x_pow = 0b10u64; // x^(2^0)
    for _ in 1..=d / 2 {
        x_pow = poly_mod(clmul(x_pow, x_pow), f);
        if poly_gcd(f, x_pow ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

/// Numerically smallest irreducible polynomial of degree `s`.
pub fn smallest_irreducible(s: usize) -> u64 {
    let top = 1u64 << s;
    (top..top << 1)
        .find(|&f| is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}
