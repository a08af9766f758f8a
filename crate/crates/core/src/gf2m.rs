//! Arithmetic in GF(2^nu) via log/antilog tables.

use crate::error::{Error, Result};

/// Minimal-weight primitive polynomials for nu = 2..=16, bit i = coefficient of x^i.
const PRIMITIVE_POLYS: [u32; 15] = [
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

pub fn primitive_polynomial(nu: u32) -> Result<u32> {
    if (2..=16).contains(&nu) {
        Ok(PRIMITIVE_POLYS[nu as usize - 2])
    } else {
        Err(Error::UnsupportedField(nu))
    }
}

/// GF(2^nu) with elements stored as `u16` in polynomial basis.
#[derive(Debug, Clone)]
pub struct Gf2mField {
    nu: u32,
    poly: u32,
    order: usize,
    // exp has length 2 * order so that exp[log a + log b] needs no reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Gf2mField {
    pub fn new(nu: u32) -> Result<Self> {
        let poly = primitive_polynomial(nu)?;
        let order = (1usize << nu) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut x: u32 = 1;
        for i in 0..order {
            exp[i] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << nu) != 0 {
                x ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self {
            nu,
            poly,
            order,
            exp,
            log,
        })
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn primitive_poly(&self) -> u32 {
        self.poly
    }

    /// Multiplicative group order `2^nu - 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `alpha^e` for any integer exponent.
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> u16 {
        self.exp[e.rem_euclid(self.order as i64) as usize]
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, a: u16) -> usize {
        debug_assert!(a != 0);
        self.log[a as usize] as usize
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        self.exp[(self.order - self.log[a as usize] as usize) % self.order]
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> u16 {
        self.mul(a, self.inv(b))
    }

    /// Cyclotomic coset of `i` modulo `2^nu - 1`.
    pub fn cyclotomic_coset(&self, i: usize) -> Vec<usize> {
        let mut coset = vec![i % self.order];
        let mut j = (2 * i) % self.order;
        while j != coset[0] {
            coset.push(j);
            j = (2 * j) % self.order;
        }
        coset
    }

    /// Minimal polynomial of `alpha^i` over GF(2), coefficients low to high.
    pub fn minimal_polynomial(&self, i: usize) -> Vec<u8> {
        let mut poly: Vec<u16> = vec![1];
        for j in self.cyclotomic_coset(i) {
            let root = self.alpha_pow(j as i64);
            // poly *= (x + root)
            let mut next = vec![0u16; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= self.mul(c, root);
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                debug_assert!(c <= 1, "minimal polynomial has non-binary coefficient");
                c as u8
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_table_polynomial_is_primitive() {
        for nu in 2..=16 {
            let f = Gf2mField::new(nu).unwrap();
            // alpha generates the whole multiplicative group: log is a bijection.
            let mut seen = vec![false; f.order() + 1];
            for e in 0..f.order() {
                let a = f.alpha_pow(e as i64);
                assert!(!seen[a as usize], "nu={nu}: alpha has order < 2^nu - 1");
                seen[a as usize] = true;
            }
            assert_eq!(f.alpha_pow(f.order() as i64), 1);
        }
    }

    #[test]
    fn antilog_inverts_log() {
        let f = Gf2mField::new(9).unwrap();
        for x in 1..=f.order() as u16 {
            assert_eq!(f.alpha_pow(f.log(x) as i64), x);
        }
    }

    #[test]
    fn field_axioms_on_gf16() {
        let f = Gf2mField::new(4).unwrap();
        for a in 0..16u16 {
            for b in 0..16u16 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..16u16 {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                }
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn unsupported_degree_is_rejected() {
        assert!(matches!(Gf2mField::new(1), Err(Error::UnsupportedField(1))));
        assert!(matches!(Gf2mField::new(17), Err(Error::UnsupportedField(17))));
    }

    #[test]
    fn minimal_polynomials_of_gf16() {
        let f = Gf2mField::new(4).unwrap();
        // m1 = x^4 + x + 1, m3 = x^4 + x^3 + x^2 + x + 1, m5 = x^2 + x + 1
        assert_eq!(f.minimal_polynomial(1), vec![1, 1, 0, 0, 1]);
        assert_eq!(f.minimal_polynomial(3), vec![1, 1, 1, 1, 1]);
        assert_eq!(f.minimal_polynomial(5), vec![1, 1, 1]);
    }
}
