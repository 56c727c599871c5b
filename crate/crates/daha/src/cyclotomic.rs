//! Exact arithmetic in cyclotomic fields `Q(z)`, `z` a primitive `n`-th root
//! of unity, represented as `Q[x]` modulo the `n`-th cyclotomic polynomial.
//!
//! A value of order 1 is a plain rational constant; binary operations lift
//! constants into the other operand's field. Values with trivial `z`-part
//! demote back to order 1, which keeps equality canonical.

use crate::scalar::{rat_is_one, rat_is_zero, rat_one, rat_zero, Rat, Scalar};
use num::BigInt;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

type UPoly = Vec<Rat>; // dense, ascending degree, no trailing zeros

fn up_trim(p: &mut UPoly) {
    while p.last().map_or(false, |c| rat_is_zero(c)) {
        p.pop();
    }
}

fn up_mul(a: &[Rat], b: &[Rat]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![rat_zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if rat_is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    up_trim(&mut out);
    out
}

fn up_sub(a: &[Rat], b: &[Rat]) -> UPoly {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), rat_zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    up_trim(&mut out);
    out
}

/// Remainder of `a` modulo monic `m`.
fn up_rem(a: &[Rat], m: &[Rat]) -> UPoly {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    up_trim(&mut r);
    while r.len() > dm {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - dm;
        for (i, c) in m.iter().enumerate() {
            r[i + shift] -= &lead * c;
        }
        up_trim(&mut r);
    }
    r
}

/// Exact quotient of `a` by monic `m` (remainder must vanish).
fn up_div_exact(a: &[Rat], m: &[Rat]) -> UPoly {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    up_trim(&mut r);
    let mut q = vec![rat_zero(); r.len().saturating_sub(dm)];
    while r.len() > dm {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - dm;
        q[shift] = lead.clone();
        for (i, c) in m.iter().enumerate() {
            r[i + shift] -= &lead * c;
        }
        up_trim(&mut r);
    }
    assert!(r.is_empty(), "inexact division");
    up_trim(&mut q);
    q
}

/// Inverse of `a` modulo monic `m` via the extended Euclidean algorithm.
fn up_inv_mod(a: &[Rat], m: &[Rat]) -> UPoly {
    // r0 = m, r1 = a; track s only for a-coefficients.
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    up_trim(&mut r1);
    let mut s0: UPoly = vec![];
    let mut s1: UPoly = vec![rat_one()];
    while !r1.is_empty() {
        // quotient of r0 by r1
        let d1 = r1.len() - 1;
        let lc1 = r1.last().unwrap().clone();
        let mut q = vec![rat_zero(); r0.len().saturating_sub(d1)];
        let mut r = r0.clone();
        while r.len() > d1 || (r.len() == d1 + 1 && !r.is_empty()) {
            if r.len() < d1 + 1 {
                break;
            }
            let lead = r.last().unwrap() / &lc1;
            let shift = r.len() - 1 - d1;
            q[shift] = lead.clone();
            for (i, c) in r1.iter().enumerate() {
                r[i + shift] -= &lead * c;
            }
            up_trim(&mut r);
        }
        let s = up_sub(&s0, &up_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 = gcd, must be a nonzero constant since m is irreducible over Q.
    assert_eq!(r0.len(), 1, "element not invertible modulo cyclotomic polynomial");
    let c = r0[0].recip();
    let mut out: UPoly = s0.iter().map(|x| x * &c).collect();
    up_trim(&mut out);
    out
}

fn cyclotomic_poly(n: u32) -> UPoly {
    static CACHE: OnceLock<Mutex<HashMap<u32, UPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by the product of Phi_d for proper divisors d.
    let mut xn1 = vec![rat_zero(); (n + 1) as usize];
    xn1[0] = -rat_one();
    xn1[n as usize] = rat_one();
    let mut p = xn1;
    for d in 1..n {
        if n % d == 0 {
            let pd = cyclotomic_poly(d);
            p = up_div_exact(&p, &pd);
        }
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Euler phi, the degree of the cyclotomic field.
pub fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Element of `Q(z_order)`; `order == 1` encodes a plain rational.
#[derive(Clone, PartialEq)]
pub struct Cyc {
    order: u32,
    coeffs: UPoly, // reduced mod Phi_order, trimmed
}

impl Cyc {
    pub fn rational(c: Rat) -> Self {
        let coeffs = if rat_is_zero(&c) { vec![] } else { vec![c] };
        Cyc { order: 1, coeffs }
    }

    /// `z^e` in `Q(z_n)`.
    pub fn zeta_pow(n: u32, e: i64) -> Self {
        assert!(n >= 1);
        let e = e.rem_euclid(n as i64) as usize;
        let mut p = vec![rat_zero(); e + 1];
        p[e] = rat_one();
        Self::reduce(n, p)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    fn reduce(n: u32, p: UPoly) -> Self {
        if n == 1 {
            let mut p = p;
            up_trim(&mut p);
            let c = if p.is_empty() { rat_zero() } else { p[0].clone() };
            return Cyc::rational(c);
        }
        let phi = cyclotomic_poly(n);
        let mut r = up_rem(&p, &phi);
        up_trim(&mut r);
        if r.len() <= 1 {
            // Demote constants for canonical equality.
            return Cyc::rational(r.first().cloned().unwrap_or_else(Rat::zero));
        }
        Cyc { order: n, coeffs: r }
    }

    fn aligned(&self, rhs: &Self) -> (u32, UPoly, UPoly) {
        match (self.order, rhs.order) {
            (a, b) if a == b => (a, self.coeffs.clone(), rhs.coeffs.clone()),
            (1, b) => (b, self.coeffs.clone(), rhs.coeffs.clone()),
            (a, 1) => (a, self.coeffs.clone(), rhs.coeffs.clone()),
            (a, b) => panic!("mixed cyclotomic orders {a} and {b}"),
        }
    }

    /// Galois conjugation `z -> z^(-1)`.
    pub fn conj_inv(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut p = vec![rat_zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = (n - i) % n;
            p[e] += c;
        }
        Self::reduce(self.order, p)
    }

    /// Galois map `z -> z^k` for `gcd(k, order) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as i64;
        let mut p = vec![rat_zero(); self.order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = ((i as i64) * k).rem_euclid(n) as usize;
            p[e] += c;
        }
        Self::reduce(self.order, p)
    }
}

impl Scalar for Cyc {
    fn zero() -> Self {
        Cyc::rational(rat_zero())
    }
    fn one() -> Self {
        Cyc::rational(rat_one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let (n, mut a, b) = self.aligned(rhs);
        if a.len() < b.len() {
            a.resize(b.len(), rat_zero());
        }
        for (i, y) in b.iter().enumerate() {
            a[i] += y;
        }
        Self::reduce(n, a)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (n, a, b) = self.aligned(rhs);
        Self::reduce(n, up_mul(&a, &b))
    }
    fn neg(&self) -> Self {
        Cyc { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.order == 1 {
            return Cyc::rational(self.coeffs[0].recip());
        }
        let phi = cyclotomic_poly(self.order);
        Self::reduce(self.order, up_inv_mod(&self.coeffs, &phi))
    }
    fn from_i64(v: i64) -> Self {
        Cyc::rational(Rat::from(BigInt::from(v)))
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if rat_is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if rat_is_one(c) => write!(f, "z")?,
                1 => write!(f, "{c}*z")?,
                _ if rat_is_one(c) => write!(f, "z^{i}")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn phi_polynomials() {
        // Phi_1 = x - 1, Phi_3 = x^2 + x + 1, Phi_12 = x^4 - x^2 + 1
        assert_eq!(cyclotomic_poly(1), vec![-rat_one(), rat_one()]);
        assert_eq!(cyclotomic_poly(3), vec![rat_one(), rat_one(), rat_one()]);
        let p12 = cyclotomic_poly(12);
        assert_eq!(
            p12,
            vec![rat_one(), rat_zero(), -rat_one(), rat_zero(), rat_one()]
        );
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn primitive_root_relations() {
        // z^3 = 1, z != 1 for order 3
        let z = Cyc::zeta_pow(3, 1);
        let z3 = z.mul(&z).mul(&z);
        assert!(z3 == Cyc::one());
        assert!(z != Cyc::one());
        // 1 + z + z^2 = 0
        let s = Cyc::one().add(&z).add(&z.mul(&z));
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_and_conjugation() {
        let z = Cyc::zeta_pow(7, 3);
        let zi = z.inv();
        assert!(z.mul(&zi) == Cyc::one());
        assert_eq!(z.conj_inv(), Cyc::zeta_pow(7, -3));
        // conj is a field automorphism
        let a = Cyc::zeta_pow(7, 2).add(&Cyc::from_i64(5));
        let b = Cyc::zeta_pow(7, 6).sub(&Cyc::from_i64(2));
        assert_eq!(a.mul(&b).conj_inv(), a.conj_inv().mul(&b.conj_inv()));
    }

    #[test]
    fn geometric_series_vanishing() {
        // (1 - q^3)/(1 - q) at q = z_3 : numerator 0, so the value is 0;
        // while (1 - q) is invertible.
        let q = Cyc::zeta_pow(3, 1);
        let one = Cyc::one();
        let num = one.sub(&q.mul(&q).mul(&q));
        assert!(num.is_zero());
        let den = one.sub(&q);
        assert!(!den.is_zero());
        let _ = den.inv();
        let _ = rat_int(0);
    }
}
