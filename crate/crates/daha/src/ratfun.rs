//! Rational functions in canonical form: reduced fraction of [`MPoly`]s with
//! monic denominator under the fixed lexicographic monomial order.

use crate::mpoly::{MPoly, Mono, MONO_ONE, NVARS};
use crate::scalar::Scalar;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFun<S: Scalar> {
    num: MPoly<S>,
    den: MPoly<S>,
}

impl<S: Scalar> RatFun<S> {
    pub fn zero() -> Self {
        RatFun { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: MPoly::one(), den: MPoly::one() }
    }

    pub fn from_poly(p: MPoly<S>) -> Self {
        RatFun { num: p, den: MPoly::one() }
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(S::from_i64(v))
    }

    /// Build `c * v^e0 * us^e1 * ul^e2` with possibly negative exponents.
    pub fn monomial(c: S, exps: [i64; NVARS]) -> Self {
        let mut up = MONO_ONE;
        let mut down = MONO_ONE;
        for i in 0..NVARS {
            if exps[i] >= 0 {
                up[i] = exps[i] as u32;
            } else {
                down[i] = (-exps[i]) as u32;
            }
        }
        RatFun { num: MPoly::monomial(c, up), den: MPoly::monomial(S::one(), down) }
    }

    pub fn new(num: MPoly<S>, den: MPoly<S>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFun { num, den };
        r.reduce();
        r
    }

    pub fn num(&self) -> &MPoly<S> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<S> {
        &self.den
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one();
            return;
        }
        if !self.den.is_one() {
            let g = self.num.gcd(&self.den);
            if !g.is_one() {
                self.num = self.num.div_exact(&g).expect("gcd divides num");
                self.den = self.den.div_exact(&g).expect("gcd divides den");
            }
        }
        // Monic denominator fixes the representative.
        let lc = self.den.leading().expect("nonzero den").1.clone();
        if lc != S::one() {
            let inv = lc.inv();
            self.num = self.num.mul_scalar(&inv);
            self.den = self.den.mul_scalar(&inv);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Self::new(num, den)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        let base = if e > 0 { self.clone() } else { self.inv() };
        let mut out = Self::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Substitute `var -> target^e` in numerator and denominator.
    pub fn subst_var_power(&self, var: usize, target: usize, e: u32) -> Self {
        Self::new(
            self.num.subst_var_power(var, target, e),
            self.den.subst_var_power(var, target, e),
        )
    }

    /// Map numerator/denominator scalars into another field. The image
    /// denominator must stay nonzero; the caller receives `None` otherwise.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Option<RatFun<T>> {
        let num = self.num.map_scalars(&f);
        let den = self.den.map_scalars(&f);
        if den.is_zero() {
            return None;
        }
        Some(RatFun::new(num, den))
    }

    /// Invert the sign of every variable exponent (`v -> 1/v` etc.); the
    /// conjugation that underlies the star involution on coefficients.
    pub fn invert_vars(&self) -> Self {
        let flip = |p: &MPoly<S>| -> (MPoly<S>, Mono) {
            // p(1/v, 1/us, 1/ul) = q(v, us, ul) / v^d0 us^d1 ul^d2
            let mut deg = MONO_ONE;
            for i in 0..NVARS {
                deg[i] = p.degree_in(i);
            }
            let mut out = MPoly::zero();
            for (m, c) in p.terms() {
                let mut k = MONO_ONE;
                for i in 0..NVARS {
                    k[i] = deg[i] - m[i];
                }
                out = out.add(&MPoly::monomial(c.clone(), k));
            }
            (out, deg)
        };
        if self.is_zero() {
            return Self::zero();
        }
        let (n, dn) = flip(&self.num);
        let (d, dd) = flip(&self.den);
        // num/den * v^(dd-dn) etc.
        let mut extra_num = MONO_ONE;
        let mut extra_den = MONO_ONE;
        for i in 0..NVARS {
            if dd[i] >= dn[i] {
                extra_num[i] = dd[i] - dn[i];
            } else {
                extra_den[i] = dn[i] - dd[i];
            }
        }
        Self::new(n.mul_mono(&extra_num), d.mul_mono(&extra_den))
    }
}

impl<S: Scalar> fmt::Debug for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<S: Scalar> fmt::Display for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{VAR_UL, VAR_V};
    use crate::scalar::Rat;

    type F = RatFun<Rat>;

    fn v(e: i64) -> F {
        F::monomial(crate::scalar::rat_int(1), [e, 0, 0])
    }

    #[test]
    fn reduction_is_canonical() {
        // (v^2 - 1)/(v - 1) reduces to v + 1
        let num = MPoly::var_pow(VAR_V, 2).sub(&MPoly::one());
        let den = MPoly::var_pow(VAR_V, 1).sub(&MPoly::one());
        let r = F::new(num, den);
        let expect = v(1).add(&F::one());
        assert_eq!(r, expect);
    }

    #[test]
    fn negative_exponent_monomials() {
        let a = v(-2);
        let b = v(2);
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn field_identities() {
        let x = v(1).add(&F::from_i64(3));
        let y = F::monomial(crate::scalar::rat_int(2), [0, 0, -1]).sub(&F::one());
        let z = v(-1).add(&F::monomial(crate::scalar::rat_int(5), [1, 0, 2]));
        // distributivity and div/mul inverses
        assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        assert_eq!(x.div(&y).mul(&y), x);
        let _ = VAR_UL;
    }

    #[test]
    fn invert_vars_is_involutive() {
        let x = v(3).add(&F::monomial(crate::scalar::rat_int(7), [1, 0, -2]));
        let y = x.invert_vars();
        assert_eq!(y.invert_vars(), x);
    }
}
