//! Fixed-precision p-adic integers stored as residues modulo `p^M`.
//!
//! Every value carries its own precision exponent. Binary operations keep the
//! smaller of the two, exact division by `p^j` drops it by `j`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest modulus we allow, so products fit comfortably in `u128`.
const MODULUS_LIMIT: u128 = 1 << 62;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn ipow(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("power overflow")
}

/// Exponent of `p` in `n` (with `n != 0`).
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Exponent of `p` in `n` for signed arguments; `None` for zero.
pub fn valuation_i128(n: i128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

pub(crate) fn mod_reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: u64) -> Option<u64> {
    let m_i = m as i128;
    let a = a.rem_euclid(m_i);
    let eg = a.extended_gcd(&m_i);
    if eg.gcd != 1 {
        return None;
    }
    Some(eg.x.rem_euclid(m_i) as u64)
}

/// The prime `p` and the working exponent `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    m: u32,
}

impl PrimeContext {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) || p < 5 {
            return Err(Error::InvalidParameter(format!(
                "p must be a prime >= 5, got {p}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("precision M must be >= 1".into()));
        }
        let mut acc: u128 = 1;
        for _ in 0..m {
            acc *= p as u128;
            if acc >= MODULUS_LIMIT {
                return Err(Error::InvalidParameter(format!(
                    "{p}^{m} exceeds the supported modulus range"
                )));
            }
        }
        Ok(PrimeContext { p, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    /// `p^M`.
    pub fn modulus(&self) -> u64 {
        ipow(self.p, self.m)
    }

    /// `p^j`.
    pub fn pow(&self, j: u32) -> u64 {
        ipow(self.p, j)
    }

    /// Same prime, different precision.
    pub fn with_precision(&self, m: u32) -> Result<Self> {
        PrimeContext::new(self.p, m)
    }

    pub fn element(&self, x: i128) -> PAdicApprox {
        PAdicApprox {
            ctx: *self,
            residue: mod_reduce(x, self.modulus()),
            precision: self.m,
        }
    }

    pub fn zero(&self) -> PAdicApprox {
        self.element(0)
    }

    pub fn one(&self) -> PAdicApprox {
        self.element(1)
    }

    /// `num/den` with `den` prime to `p`.
    pub fn ratio(&self, num: i128, den: i128) -> Result<PAdicApprox> {
        let inv = inv_mod(den, self.modulus()).ok_or_else(|| {
            Error::Domain(format!("denominator {den} is not a unit mod {}", self.p))
        })?;
        Ok(self.element(num).mul(self.element(inv as i128)))
    }
}

/// A residue modulo `p^precision`, with `precision <= M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PAdicApprox {
    ctx: PrimeContext,
    residue: u64,
    precision: u32,
}

impl PAdicApprox {
    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    fn modulus(&self) -> u64 {
        ipow(self.ctx.p, self.precision)
    }

    fn with(&self, residue: u64, precision: u32) -> Self {
        let m = ipow(self.ctx.p, precision);
        PAdicApprox {
            ctx: self.ctx,
            residue: residue % m,
            precision,
        }
    }

    /// Representative in `(-p^k/2, p^k/2]`.
    pub fn to_signed(&self) -> i128 {
        let m = self.modulus() as i128;
        let r = self.residue as i128;
        if 2 * r > m {
            r - m
        } else {
            r
        }
    }

    /// Forget digits beyond `p^k`.
    pub fn reduce(&self, k: u32) -> Self {
        let k = k.min(self.precision);
        self.with(self.residue, k)
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    /// Exponent of `p` dividing the residue; equals the precision for zero.
    pub fn valuation(&self) -> u32 {
        if self.residue == 0 {
            self.precision
        } else {
            valuation_u64(self.residue, self.ctx.p).min(self.precision)
        }
    }

    pub fn is_unit(&self) -> bool {
        self.precision > 0 && !self.residue.is_multiple_of(self.ctx.p)
    }

    /// Whether `self ≡ other (mod p^k)`; `k` is clipped to the shared precision.
    pub fn congruent(&self, other: &Self, k: u32) -> bool {
        let k = k.min(self.precision).min(other.precision);
        let m = ipow(self.ctx.p, k);
        self.residue % m == other.residue % m
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(pow_mod(self.residue, e, self.modulus()), self.precision)
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Domain(format!(
                "{self} is not a unit and cannot be inverted"
            )));
        }
        let r = inv_mod(self.residue as i128, self.modulus()).expect("unit is invertible");
        Ok(self.with(r, self.precision))
    }

    /// Exact division by `p^j`; fails unless the residue is divisible.
    pub fn div_p_pow(&self, j: u32) -> Result<Self> {
        if j > self.precision {
            return Err(Error::Precision {
                required: j as usize,
                available: self.precision as usize,
            });
        }
        let pj = ipow(self.ctx.p, j);
        if !self.residue.is_multiple_of(pj) {
            return Err(Error::NotDivisible {
                p: self.ctx.p,
                exponent: j,
            });
        }
        Ok(self.with(self.residue / pj, self.precision - j))
    }

    /// Multiplication by `p^j`; precision rises by `j` up to the context cap.
    pub fn mul_p_pow(&self, j: u32) -> Self {
        let prec = (self.precision + j).min(self.ctx.m);
        let m = ipow(self.ctx.p, prec);
        let pj = pow_mod(self.ctx.p, j as u64, m);
        self.with(mul_mod(self.residue, pj, m), prec)
    }

    /// Division by `p^v · unit`, consuming `v` digits of precision.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let v = d.valuation();
        if v >= d.precision {
            return Err(Error::Domain("division by an element indistinguishable from zero".into()));
        }
        let num = self.div_p_pow(v)?;
        let unit = d.div_p_pow(v)?;
        Ok(num * unit.inv()?)
    }

    pub fn scale(&self, k: i128) -> Self {
        *self * self.ctx.element(k)
    }
}

impl fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.ctx.p, self.precision)
    }
}

fn join(a: &PAdicApprox, b: &PAdicApprox) -> (PrimeContext, u32, u64) {
    assert_eq!(a.ctx.p, b.ctx.p, "mixing different primes");
    let prec = a.precision.min(b.precision);
    (a.ctx, prec, ipow(a.ctx.p, prec))
}

impl Add for PAdicApprox {
    type Output = PAdicApprox;
    fn add(self, rhs: Self) -> Self {
        let (ctx, prec, m) = join(&self, &rhs);
        PAdicApprox {
            ctx,
            residue: ((self.residue % m) + (rhs.residue % m)) % m,
            precision: prec,
        }
    }
}

impl Sub for PAdicApprox {
    type Output = PAdicApprox;
    fn sub(self, rhs: Self) -> Self {
        let (ctx, prec, m) = join(&self, &rhs);
        PAdicApprox {
            ctx,
            residue: ((self.residue % m) + m - (rhs.residue % m)) % m,
            precision: prec,
        }
    }
}

impl Mul for PAdicApprox {
    type Output = PAdicApprox;
    fn mul(self, rhs: Self) -> Self {
        let (ctx, prec, m) = join(&self, &rhs);
        PAdicApprox {
            ctx,
            residue: mul_mod(self.residue, rhs.residue, m),
            precision: prec,
        }
    }
}

impl Neg for PAdicApprox {
    type Output = PAdicApprox;
    fn neg(self) -> Self {
        let m = self.modulus();
        self.with((m - self.residue % m) % m, self.precision)
    }
}

/// Teichmüller part and principal part of a unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub teichmuller: PAdicApprox,
    pub principal: PAdicApprox,
}

/// Limit of `x^(p^j)`, computed by repeated p-th powering.
pub fn teichmuller(x: &PAdicApprox) -> Result<PAdicApprox> {
    if !x.is_unit() {
        return Err(Error::Domain(format!("{x} is not a unit")));
    }
    let p = x.p();
    let mut w = *x;
    for _ in 0..x.precision() {
        let next = w.pow(p);
        if next == w {
            break;
        }
        w = next;
    }
    Ok(w)
}

pub fn decompose_unit(x: &PAdicApprox) -> Result<UnitDecomposition> {
    let w = teichmuller(x)?;
    let principal = *x * w.inv()?;
    Ok(UnitDecomposition {
        teichmuller: w,
        principal,
    })
}

/// Sum of `(-1)^(j+1) p^(j-shift) y^j / j` with `x = 1 + p y`.
fn log_series(y: &PAdicApprox, shift: u32, prec: u32) -> PAdicApprox {
    let ctx = y.ctx();
    let p = ctx.p();
    let mut acc = ctx.zero().reduce(prec);
    let mut ypow = *y;
    let bound = 2 * prec + 8;
    for j in 1..=bound as u64 {
        let vj = valuation_u64(j, p);
        let e = j as i64 - shift as i64 - vj as i64;
        debug_assert!(e >= 0);
        if (e as u32) < prec {
            let unit = j / ipow(p, vj);
            let term = ypow.reduce(prec).mul_p_pow(e as u32).reduce(prec)
                * ctx.ratio(1, unit as i128).expect("unit part").reduce(prec);
            acc = if j % 2 == 1 { acc + term } else { acc - term };
        }
        ypow = ypow * *y;
    }
    acc
}

/// The p-adic logarithm of a unit, via the principal part.
pub fn padic_log(u: &PAdicApprox) -> Result<PAdicApprox> {
    let dec = decompose_unit(u)?;
    let x = dec.principal - u.ctx().one();
    let prec = u.precision();
    if prec == 1 {
        return Ok(u.ctx().zero().reduce(1));
    }
    let y = x.div_p_pow(1)?;
    Ok(log_series(&y, 0, prec))
}

/// `(1/p)·log` on `1 + pZ_p`, losing one digit of precision.
pub fn one_pth_log(x: &PAdicApprox) -> Result<PAdicApprox> {
    let one = x.ctx().one();
    if !(*x - one).congruent(&x.ctx().zero(), 1) {
        return Err(Error::Domain(format!("{x} is not congruent to 1 mod p")));
    }
    let prec = x.precision() - 1;
    if prec == 0 {
        return Ok(x.ctx().zero().reduce(0));
    }
    let y = (*x - one).div_p_pow(1)?;
    Ok(log_series(&y, 1, prec))
}

/// `u^s` for `u ≡ 1 mod p` through the binomial series in `u - 1`.
pub fn principal_power(u: &PAdicApprox, s: &PAdicApprox) -> Result<PAdicApprox> {
    let ctx = u.ctx();
    let one = ctx.one();
    if !(*u - one).congruent(&ctx.zero(), 1) {
        return Err(Error::Domain(format!("{u} is not congruent to 1 mod p")));
    }
    let prec = u.precision().min(s.precision() + 1);
    if prec == 0 {
        return Ok(ctx.zero().reduce(0));
    }
    let p = ctx.p();
    let y = (*u - one).div_p_pow(1)?;
    let s_int = s.residue() as i128;
    let mut acc = one.reduce(prec);
    // falling factorial s(s-1)...(s-j+1), the power y^j, and v_p(j!)
    let mut falling = one;
    let mut ypow = one;
    let mut fact_unit = one;
    let mut fact_val: u32 = 0;
    // j - v_p(j!) >= j(p-2)/(p-1), so terms past this bound vanish mod p^prec
    let bound = (prec as u64 * (p - 1)).div_ceil(p - 2) + 1;
    for j in 1..=bound {
        falling = falling * ctx.element(s_int - (j as i128 - 1));
        ypow = ypow * y;
        let vj = valuation_u64(j, p);
        fact_val += vj;
        fact_unit = fact_unit * ctx.element((j / ipow(p, vj)) as i128);
        let e = j as u32 - fact_val;
        if e < prec {
            let term = (falling * ypow).mul_p_pow(e) * fact_unit.inv()?;
            acc = acc + term.reduce(prec);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, m: u32) -> PrimeContext {
        PrimeContext::new(p, m).unwrap()
    }

    #[test]
    fn teichmuller_of_two() {
        let c2 = ctx(5, 2);
        assert_eq!(teichmuller(&c2.element(2)).unwrap().residue(), 7);
        let c4 = ctx(5, 4);
        assert_eq!(teichmuller(&c4.element(2)).unwrap().residue(), 182);
        let d = decompose_unit(&c4.element(1)).unwrap();
        assert_eq!(d.teichmuller, c4.one());
        assert_eq!(d.principal, c4.one());
    }

    #[test]
    fn log_examples() {
        let c = ctx(5, 3);
        assert!(padic_log(&c.one()).unwrap().is_zero());
        assert_eq!(padic_log(&c.element(6)).unwrap().residue(), 55);
        let c6 = ctx(5, 6);
        let l3 = padic_log(&c6.element(3)).unwrap();
        let l81 = padic_log(&c6.element(81)).unwrap();
        assert_eq!(l3, l81 * c6.ratio(1, 4).unwrap());
    }

    #[test]
    fn one_pth_log_examples() {
        let c = ctx(5, 4);
        assert!(one_pth_log(&c.one()).unwrap().is_zero());
        let r = one_pth_log(&c.element(6)).unwrap();
        assert_eq!(r.precision(), 3);
        assert_eq!(r.residue() % 25, 11);
        let x = c.element(6).pow(5);
        let lhs = one_pth_log(&x).unwrap();
        let rhs = padic_log(&c.element(6)).unwrap();
        assert!(lhs.congruent(&rhs, 3));
        assert!(one_pth_log(&c.element(2)).is_err());
    }

    #[test]
    fn principal_power_examples() {
        let c = ctx(5, 3);
        let u = c.element(6);
        assert_eq!(principal_power(&u, &c.zero()).unwrap(), c.one());
        assert_eq!(principal_power(&u, &c.one()).unwrap(), u);
        assert_eq!(principal_power(&u, &c.element(2)).unwrap().residue(), 36);
        assert!(principal_power(&c.element(2), &c.one()).is_err());
    }

    #[test]
    fn exact_division_refuses_remainders() {
        let c = ctx(5, 4);
        assert_eq!(c.element(50).div_p_pow(2).unwrap().residue(), 2);
        assert!(matches!(
            c.element(51).div_p_pow(1),
            Err(Error::NotDivisible { .. })
        ));
        assert!(c.element(10).inv().is_err());
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(PrimeContext::new(3, 4).is_err());
        assert!(PrimeContext::new(9, 4).is_err());
        assert!(PrimeContext::new(5, 0).is_err());
        assert!(PrimeContext::new(5, 40).is_err());
    }
}
