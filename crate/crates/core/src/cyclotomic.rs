//! Arithmetic in `(Z/p^M)[T]/(Φ_{p^n}(T))` for small `n`.

use crate::error::{Error, Result};
use crate::padic::{mul_mod, PAdicApprox, PrimeContext};

/// Element of `(Z/p^M)[T]/Φ_{p^n}` in the power basis `1, T, ..., T^{φ(p^n)-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicElement {
    ctx: PrimeContext,
    level: u32,
    coeffs: Vec<u64>,
}

/// Highest supported level.
pub const MAX_LEVEL: u32 = 2;

fn degree(p: u64, level: u32) -> usize {
    if level == 0 {
        1
    } else {
        ((p - 1) * p.pow(level - 1)) as usize
    }
}

impl CyclotomicElement {
    pub fn zero(ctx: PrimeContext, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::UnsupportedRing(format!(
                "cyclotomic level {level} exceeds {MAX_LEVEL}"
            )));
        }
        Ok(CyclotomicElement {
            ctx,
            level,
            coeffs: vec![0; degree(ctx.p(), level)],
        })
    }

    pub fn constant(ctx: PrimeContext, level: u32, x: i128) -> Result<Self> {
        let mut e = Self::zero(ctx, level)?;
        e.coeffs[0] = ctx.element(x).residue();
        Ok(e)
    }

    /// `T^e`, the `e`-th power of a primitive `p^n`-th root of unity.
    pub fn root_power(ctx: PrimeContext, level: u32, e: i64) -> Result<Self> {
        let mut z = Self::zero(ctx, level)?;
        let order = ctx.p().pow(level) as i64;
        let e = e.rem_euclid(order.max(1)) as usize;
        let mut raw = vec![0u64; order.max(1) as usize];
        raw[e] = 1;
        z.coeffs = z.reduce_raw(raw);
        Ok(z)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    fn modulus(&self) -> u64 {
        self.ctx.modulus()
    }

    /// Reduce a polynomial of any degree modulo `Φ_{p^n}` and `p^M`.
    fn reduce_raw(&self, mut raw: Vec<u64>) -> Vec<u64> {
        let m = self.modulus();
        let d = degree(self.ctx.p(), self.level);
        if self.level == 0 {
            let s = raw.iter().fold(0u64, |acc, &x| (acc + x % m) % m);
            return vec![s];
        }
        let step = self.ctx.p().pow(self.level - 1) as usize;
        // T^{d + r} = -sum_{i<p-1} T^{i*step + r}
        for top in (d..raw.len()).rev() {
            let c = raw[top] % m;
            if c == 0 {
                continue;
            }
            raw[top] = 0;
            let base = top - d;
            for i in 0..(self.ctx.p() as usize - 1) {
                let idx = base + i * step;
                raw[idx] = (raw[idx] + m - c) % m;
            }
        }
        raw.truncate(d);
        raw.resize(d, 0);
        raw.iter().map(|x| x % m).collect()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.level, other.level, "cyclotomic level mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let m = self.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % m)
            .collect();
        CyclotomicElement { coeffs, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let m = self.modulus();
        let d = self.coeffs.len();
        let mut raw = vec![0u64; 2 * d - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                raw[i + j] = (raw[i + j] + mul_mod(a, b, m)) % m;
            }
        }
        let coeffs = self.reduce_raw(raw);
        CyclotomicElement { coeffs, ..self.clone() }
    }

    pub fn scale(&self, k: i128) -> Self {
        let m = self.modulus();
        let r = self.ctx.element(k).residue();
        let coeffs = self.coeffs.iter().map(|&a| mul_mod(a, r, m)).collect();
        CyclotomicElement { coeffs, ..self.clone() }
    }

    pub fn scale_padic(&self, x: &PAdicApprox) -> Self {
        self.scale(x.residue() as i128)
    }

    /// Galois conjugate `T ↦ T^u` for `u` prime to `p`.
    pub fn conjugate(&self, u: u64) -> Self {
        let order = self.ctx.p().pow(self.level) as usize;
        let mut raw = vec![0u64; order.max(1)];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let idx = (i * u as usize) % order.max(1);
            raw[idx] = (raw[idx] + a) % self.modulus();
        }
        let coeffs = self.reduce_raw(raw);
        CyclotomicElement { coeffs, ..self.clone() }
    }

    /// Sum over all Galois conjugates.
    pub fn trace(&self) -> Self {
        let p = self.ctx.p();
        let order = p.pow(self.level);
        let mut acc = Self::zero(self.ctx, self.level).expect("level already validated");
        for u in 1..order.max(2) {
            if self.level > 0 && u % p == 0 {
                continue;
            }
            acc = acc.add(&self.conjugate(u));
            if self.level == 0 {
                break;
            }
        }
        acc
    }

    /// The constant coefficient when every other coefficient vanishes.
    pub fn as_constant(&self) -> Option<PAdicApprox> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.ctx.element(self.coeffs[0] as i128))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_have_the_right_order() {
        let ctx = PrimeContext::new(5, 4).unwrap();
        for level in 0..=2 {
            let t = CyclotomicElement::root_power(ctx, level, 1).unwrap();
            let mut acc = CyclotomicElement::constant(ctx, level, 1).unwrap();
            for _ in 0..5u64.pow(level) {
                acc = acc.mul(&t);
            }
            assert_eq!(acc, CyclotomicElement::constant(ctx, level, 1).unwrap());
        }
    }

    #[test]
    fn traces_of_roots() {
        let ctx = PrimeContext::new(5, 4).unwrap();
        let one = CyclotomicElement::constant(ctx, 1, 1).unwrap();
        assert_eq!(one.trace().as_constant().unwrap().residue(), 4);
        let t = CyclotomicElement::root_power(ctx, 1, 1).unwrap();
        assert_eq!(t.trace().as_constant().unwrap().to_signed(), -1);
        let t2 = CyclotomicElement::root_power(ctx, 2, 5).unwrap();
        assert_eq!(t2.trace().as_constant().unwrap().to_signed(), -5);
        let t3 = CyclotomicElement::root_power(ctx, 2, 1).unwrap();
        assert_eq!(t3.trace().as_constant().unwrap().to_signed(), 0);
    }

    #[test]
    fn level_three_is_refused() {
        let ctx = PrimeContext::new(5, 2).unwrap();
        assert!(CyclotomicElement::zero(ctx, 3).is_err());
    }
}
