//! Sparse multivariate polynomials in the formal roots `v = q^(1/2m)`,
//! `us = t_short^(1/2)`, `ul = t_long^(1/2)`.
//!
//! Exponents are nonnegative; negative powers live in the denominator of a
//! [`crate::ratfun::RatFun`]. Three variable slots are always present; unused
//! slots simply never acquire a nonzero exponent. After a cyclotomic
//! specialization the `v` slot stays at zero.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Number of variable slots: `v`, `us`, `ul`.
pub const NVARS: usize = 3;
pub const VAR_V: usize = 0;
pub const VAR_US: usize = 1;
pub const VAR_UL: usize = 2;

pub const VAR_NAMES: [&str; NVARS] = ["v", "us", "ul"];

/// Exponent vector, compared lexicographically (v, us, ul).
pub type Mono = [u32; NVARS];

pub const MONO_ONE: Mono = [0; NVARS];

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut r = *a;
    for i in 0..NVARS {
        r[i] += b[i];
    }
    r
}

fn mono_div(a: &Mono, b: &Mono) -> Option<Mono> {
    let mut r = *a;
    for i in 0..NVARS {
        r[i] = a[i].checked_sub(b[i])?;
    }
    Some(r)
}

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly<S: Scalar> {
    /// Nonzero terms only.
    terms: BTreeMap<Mono, S>,
}

impl<S: Scalar> MPoly<S> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(MONO_ONE, c);
        }
        MPoly { terms: t }
    }

    pub fn monomial(c: S, m: Mono) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        MPoly { terms: t }
    }

    /// Single variable to a nonnegative power.
    pub fn var_pow(var: usize, e: u32) -> Self {
        let mut m = MONO_ONE;
        m[var] = e;
        Self::monomial(S::one(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&MONO_ONE).map_or(false, |c| *c == S::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&MONO_ONE))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading (lexicographically largest) term.
    pub fn leading(&self) -> Option<(&Mono, &S)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Mono) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).min().unwrap_or(0)
    }

    fn insert_add(&mut self, m: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.insert_add(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.insert_add(*m, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in rhs.terms.iter() {
                out.insert_add(mono_mul(m1, m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (*m, a.mul(c))).collect() }
    }

    pub fn mul_mono(&self, m: &Mono) -> Self {
        MPoly { terms: self.terms.iter().map(|(k, a)| (mono_mul(k, m), a.clone())).collect() }
    }

    /// Exact division; `None` when the division has a remainder.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (*m, c.clone())
        };
        let dinv = dc.inv();
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (*m, c.clone())
            };
            let qm = mono_div(&rm, &dm)?;
            let qc = rc.mul(&dinv);
            let t = Self::monomial(qc, qm);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(d));
        }
        Some(quot)
    }

    /// Substitute a variable by `v_target^e` (used for `t = q^k`
    /// specializations where `u_nu = v^(2 m k_nu / nu)`).
    pub fn subst_var_power(&self, var: usize, target: usize, e: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms.iter() {
            let mut k = *m;
            let ev = k[var];
            k[var] = 0;
            k[target] += ev * e;
            out.insert_add(k, c.clone());
        }
        out
    }

    /// Map every scalar through `f`, dropping zero images.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MPoly<T> {
        let mut out = MPoly::zero();
        for (m, c) in self.terms.iter() {
            out.insert_add(*m, f(c));
        }
        out
    }

    /// Monomial content: the per-variable minimum exponent.
    pub fn mono_content(&self) -> Mono {
        let mut m = self
            .terms
            .keys()
            .next()
            .copied()
            .unwrap_or(MONO_ONE);
        for k in self.terms.keys() {
            for i in 0..NVARS {
                m[i] = m[i].min(k[i]);
            }
        }
        m
    }

    pub fn div_mono(&self, m: &Mono) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (mono_div(k, m).expect("monomial not divisible"), c.clone()))
                .collect(),
        }
    }

    /// Normalize so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) => {
                let ci = c.inv();
                self.mul_scalar(&ci)
            }
        }
    }

    /// View as univariate in `var` with `MPoly` coefficients (ascending degree).
    fn to_univar(&self, var: usize) -> Vec<MPoly<S>> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (m, c) in self.terms.iter() {
            let e = m[var] as usize;
            let mut k = *m;
            k[var] = 0;
            out[e].insert_add(k, c.clone());
        }
        out
    }

    fn from_univar(coeffs: Vec<MPoly<S>>, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, p) in coeffs.into_iter().enumerate() {
            for (m, c) in p.terms.into_iter() {
                let mut k = m;
                k[var] = e as u32;
                out.insert_add(k, c);
            }
        }
        out
    }

    /// Divide out the scalar content (when the ground field provides one) so
    /// that pseudo-remainder sequences stay primitive.
    fn strip_scalar_content(&self) -> Self {
        let mut it = self.terms.values();
        let Some(first) = it.next() else { return self.clone() };
        let mut c = first.clone();
        for v in it {
            match S::content_pair(&c, v) {
                Some(g) => c = g,
                None => return self.clone(),
            }
        }
        if c.is_zero() || c == S::one() {
            return self.clone();
        }
        let inv = c.inv();
        self.mul_scalar(&inv)
    }

    /// GCD, normalized monic. Primitive pseudo-remainder sequence with
    /// recursion over the variables; monomial content split off first.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        let ca = self.mono_content();
        let cb = rhs.mono_content();
        let mut cg = MONO_ONE;
        for i in 0..NVARS {
            cg[i] = ca[i].min(cb[i]);
        }
        let a = self.div_mono(&ca);
        let b = rhs.div_mono(&cb);
        let g = Self::gcd_primitive(&a, &b);
        g.mul_mono(&cg).monic()
    }

    fn active_vars(a: &Self, b: &Self) -> Vec<usize> {
        (0..NVARS)
            .filter(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0)
            .collect()
    }

    fn gcd_primitive(a: &Self, b: &Self) -> Self {
        let vars = Self::active_vars(a, b);
        if vars.is_empty() {
            return Self::one();
        }
        // Main variable: the active one of highest total degree keeps the
        // recursion shallow.
        let var = *vars
            .iter()
            .max_by_key(|&&i| a.degree_in(i).max(b.degree_in(i)))
            .unwrap();
        if a.degree_in(var) == 0 || b.degree_in(var) == 0 {
            // One side is free of the main variable: gcd divides its content.
            let (free, other) = if a.degree_in(var) == 0 { (a, b) } else { (b, a) };
            let cont = Self::content_in(other, var);
            return Self::gcd_primitive(free, &cont);
        }
        let (mut p, mut q) = if a.degree_in(var) >= b.degree_in(var) {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        let cont_p = Self::content_in(&p, var);
        let cont_q = Self::content_in(&q, var);
        let cont_g = cont_p.gcd(&cont_q);
        p = p.div_exact(&cont_p).expect("content divides").strip_scalar_content();
        q = q.div_exact(&cont_q).expect("content divides").strip_scalar_content();
        loop {
            let r = Self::pseudo_rem(&p, &q, var).strip_scalar_content();
            if r.is_zero() {
                break;
            }
            let rc = Self::content_in(&r, var);
            p = q;
            q = r
                .div_exact(&rc)
                .expect("content divides")
                .strip_scalar_content();
            if q.degree_in(var) == 0 {
                // Coprime in the main variable.
                return cont_g;
            }
        }
        cont_g.mul(&q).monic()
    }

    /// Content w.r.t. `var`: gcd of the univariate coefficients.
    fn content_in(p: &Self, var: usize) -> Self {
        let coeffs = p.to_univar(var);
        let mut g = Self::zero();
        for c in coeffs.iter() {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    return g;
                }
            }
        }
        g
    }

    /// Pseudo-remainder of `a` by `b` in `var` (deg a >= deg b in `var`).
    fn pseudo_rem(a: &Self, b: &Self, var: usize) -> Self {
        let da = a.degree_in(var) as i64;
        let db = b.degree_in(var) as i64;
        assert!(db >= 1 && da >= db);
        let bu = b.to_univar(var);
        let lb = bu.last().unwrap().clone();
        let mut ru = a.to_univar(var);
        while ru.len() as i64 - 1 >= db && !ru.is_empty() {
            let dr = ru.len() - 1;
            let lr = ru.last().unwrap().clone();
            if lr.is_zero() {
                ru.pop();
                continue;
            }
            // r <- lb * r - lr * x^(dr-db) * b
            for c in ru.iter_mut() {
                *c = c.mul(&lb);
            }
            let shift = dr - db as usize;
            for (i, bc) in bu.iter().enumerate() {
                let t = lr.mul(bc);
                ru[i + shift] = ru[i + shift].sub(&t);
            }
            while ru.last().map_or(false, |c| c.is_zero()) {
                ru.pop();
            }
            if ru.is_empty() {
                break;
            }
            // Keep the sequence primitive; otherwise coefficients double in
            // size at every elimination step.
            let whole = Self::from_univar(ru.clone(), var).strip_scalar_content();
            ru = whole.to_univar(var);
        }
        Self::from_univar(ru, var)
    }
}

impl<S: Scalar> fmt::Debug for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<S: Scalar> fmt::Display for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending lex order for readability and stable output.
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            if *m == MONO_ONE || *c != S::one() {
                parts.push(format!("{c}"));
            }
            for i in 0..NVARS {
                match m[i] {
                    0 => {}
                    1 => parts.push(VAR_NAMES[i].to_string()),
                    e => parts.push(format!("{}^{}", VAR_NAMES[i], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rat};

    fn v() -> MPoly<Rat> {
        MPoly::var_pow(VAR_V, 1)
    }
    fn ul() -> MPoly<Rat> {
        MPoly::var_pow(VAR_UL, 1)
    }

    #[test]
    fn arithmetic_basics() {
        let p = v().add(&MPoly::one());
        let q = v().sub(&MPoly::one());
        let prod = p.mul(&q);
        let expect = MPoly::var_pow(VAR_V, 2).sub(&MPoly::one());
        assert_eq!(prod, expect);
        assert!(prod.div_exact(&p).is_some());
        assert_eq!(prod.div_exact(&p).unwrap(), q);
    }

    #[test]
    fn gcd_univariate() {
        // (v^2 - 1) and (v^2 - 2v + 1) share (v - 1).
        let a = MPoly::var_pow(VAR_V, 2).sub(&MPoly::one());
        let b = MPoly::var_pow(VAR_V, 2)
            .sub(&v().mul_scalar(&rat_int(2)))
            .add(&MPoly::one());
        let g = a.gcd(&b);
        assert_eq!(g, v().sub(&MPoly::one()));
    }

    #[test]
    fn gcd_multivariate() {
        // g = v*ul - 1, a = g*(v + ul), b = g*(v - ul)
        let g = v().mul(&ul()).sub(&MPoly::one());
        let a = g.mul(&v().add(&ul()));
        let b = g.mul(&v().sub(&ul()));
        let got = a.gcd(&b);
        assert_eq!(got, g.monic());
    }

    #[test]
    fn gcd_coprime() {
        let a = v().add(&MPoly::one());
        let b = ul().add(&MPoly::one());
        assert!(a.gcd(&b).is_one());
    }

    #[test]
    fn subst_power() {
        // ul^2 with ul -> v^3 gives v^6
        let p = MPoly::<Rat>::var_pow(VAR_UL, 2);
        let q = p.subst_var_power(VAR_UL, VAR_V, 3);
        assert_eq!(q, MPoly::var_pow(VAR_V, 6));
    }
}
