//! The coefficient field and the representation space.
//!
//! Coefficients are rational functions in `v = q^(1/2m)` and `u_nu =
//! t_nu^(1/2)` (one `u` per root-length class). Every exponent of `q` and
//! `t_nu` produced by the theory lands in `(1/2m)Z` resp. `(1/2)Z`, so `v`
//! and `u` close the exponent lattice; fractional exponents in `v, u` are a
//! hard error. Laurent polynomials are finite maps from coweights to
//! coefficients.

use crate::cyclotomic::Cyc;
use crate::mpoly::{MPoly, Mono, NVARS, VAR_UL, VAR_US, VAR_V};
use crate::ratfun::RatFun;
use crate::rootsys::{RootSystem, Weight};
use crate::scalar::{rat_int, to_i64, Rat, Scalar};
use crate::weyl::{WElem, Weyl};
use crate::{Error, Result};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Generic coefficient: rational function in `v, us, ul` over `Q`.
pub type C = RatFun<Rat>;

/// Variable slot of length class `class` (0 = long -> `ul`, 1 = short -> `us`).
pub fn u_slot(class: usize) -> usize {
    match class {
        0 => VAR_UL,
        1 => VAR_US,
        _ => panic!("at most two length classes"),
    }
}

/// `q^e` as a coefficient; `e` must lie in `(1/2m)Z`.
pub fn q_pow(rs: &RootSystem, e: &Rat) -> Result<C> {
    let ve = e * rat_int(2 * rs.m);
    if !ve.is_integer() {
        return Err(Error::NonIntegralExponent {
            var: "v",
            num: i64::try_from(ve.numer().clone()).unwrap_or(i64::MAX),
            den: i64::try_from(ve.denom().clone()).unwrap_or(i64::MAX),
        });
    }
    let mut exps = [0i64; NVARS];
    exps[VAR_V] = to_i64(&ve);
    Ok(C::monomial(Rat::one_scalar(), exps))
}

/// `t_class^e` as a coefficient; `e` must lie in `(1/2)Z`.
pub fn t_pow(class: usize, e: &Rat) -> Result<C> {
    let ue = e * rat_int(2);
    if !ue.is_integer() {
        return Err(Error::NonIntegralExponent {
            var: "u",
            num: i64::try_from(ue.numer().clone()).unwrap_or(i64::MAX),
            den: i64::try_from(ue.denom().clone()).unwrap_or(i64::MAX),
        });
    }
    let mut exps = [0i64; NVARS];
    exps[u_slot(class)] = to_i64(&ue);
    Ok(C::monomial(Rat::one_scalar(), exps))
}

/// `t_class^(1/2)` (the generator `u`), or its inverse.
pub fn t_half(class: usize, positive: bool) -> C {
    let mut exps = [0i64; NVARS];
    exps[u_slot(class)] = if positive { 1 } else { -1 };
    C::monomial(Rat::one_scalar(), exps)
}

/// `t^(1/2) - t^(-1/2)` for a class.
pub fn t_half_diff(class: usize) -> C {
    t_half(class, true).sub(&t_half(class, false))
}

trait OneScalar {
    fn one_scalar() -> Self;
}
impl OneScalar for Rat {
    fn one_scalar() -> Self {
        <Rat as Scalar>::one()
    }
}

/// Sparse Laurent polynomial: finite map `coweight -> coefficient`.
#[derive(Clone, PartialEq)]
pub struct LPoly {
    terms: BTreeMap<Weight, C>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank), C::one())
    }

    pub fn monomial(b: Weight, c: C) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(b, c);
        }
        LPoly { terms: t }
    }

    pub fn x(b: &Weight) -> Self {
        Self::monomial(b.clone(), C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &C)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<Weight> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, b: &Weight) -> C {
        self.terms.get(b).cloned().unwrap_or_else(C::zero)
    }

    pub fn insert_add(&mut self, b: Weight, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&b);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in rhs.terms.iter() {
            out.insert_add(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in rhs.terms.iter() {
            out.insert_add(b.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LPoly { terms: self.terms.iter().map(|(b, c)| (b.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LPoly { terms: self.terms.iter().map(|(b, a)| (b.clone(), a.mul(c))).collect() }
    }

    /// Multiply by the monomial `c * x_b`.
    pub fn mul_monomial(&self, b: &Weight, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.add(b), a.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (b1, c1) in self.terms.iter() {
            for (b2, c2) in rhs.terms.iter() {
                out.insert_add(b1.add(b2), c1.mul(c2));
            }
        }
        out
    }

    /// Constant term: the coefficient of `x^0`.
    pub fn constant_term(&self) -> C {
        let rank = self.terms.keys().next().map_or(0, |w| w.rank());
        self.coeff(&Weight::zero(rank))
    }

    /// Star conjugation: `x_b -> x_{-b}`, `q -> q^{-1}`, `t -> t^{-1}`.
    pub fn star(&self) -> Self {
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (b.neg(), c.invert_vars()))
                .collect(),
        }
    }

    /// Bar conjugation: `x_b -> x_{-b}` with coefficients fixed.
    pub fn bar(&self) -> Self {
        LPoly {
            terms: self.terms.iter().map(|(b, c)| (b.neg(), c.clone())).collect(),
        }
    }

    /// Apply a finite Weyl element to the exponents only (`w(x_b) = x_{w(b)}`).
    pub fn map_weights(&self, w: &WElem) -> Self {
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (w.act_weight(b), c.clone()))
                .collect(),
        }
    }

    /// Substitute `t_nu = q_nu^{k_nu}` in every coefficient.
    pub fn specialize_t_qk(&self, rs: &RootSystem, k: &[i64]) -> Self {
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (b.clone(), specialize_coeff_t_qk(rs, c, k)))
                .collect(),
        }
    }
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*x{b}")?;
        }
        Ok(())
    }
}

/// Substitute `t_nu = q_nu^{k_nu}` (so `u_nu -> v^(2 m k_nu / nu)`).
pub fn specialize_coeff_t_qk(rs: &RootSystem, c: &C, k: &[i64]) -> C {
    let mut out = c.clone();
    for class in 0..rs.n_classes() {
        let e = rat_int(2 * rs.m * k[class]) / rs.nu(class);
        assert!(e.is_integer(), "t=q^k exponent must be integral in v");
        let e = to_i64(&e);
        assert!(e >= 0, "negative k is not supported");
        out = out.subst_var_power(u_slot(class), VAR_V, e as u32);
    }
    out
}

/// A point of evaluation `q^b t^{-w(rho)}`.
#[derive(Clone, Debug)]
pub struct SpectralPoint {
    pub b: Weight,
    pub w: WElem,
    /// Cached `w(rho_nu)` in rational b-coordinates, one per class.
    w_rho: Vec<Vec<Rat>>,
}

impl SpectralPoint {
    pub fn new(rs: &RootSystem, b: Weight, w: WElem) -> Self {
        let w_rho = rs.rho.iter().map(|r| w.act_coords(r)).collect();
        SpectralPoint { b, w, w_rho }
    }

    /// The point `#b = q^b t^{-omega_b^{-1}(rho)}` attached to a coweight.
    pub fn sharp(weyl: &Weyl, b: &Weight) -> Self {
        let (_, omega) = weyl.decompose_pi_omega(b);
        Self::new(&weyl.rs, b.clone(), omega.inverse())
    }

    /// The base point `t^{-rho}` (all `b = 0`, `w = id`).
    pub fn t_rho_inv(weyl: &Weyl) -> Self {
        Self::new(&weyl.rs, Weight::zero(weyl.rs.rank), WElem::identity(&weyl.rs))
    }

    /// The point `q^b t^{-rho}` used by the symmetric eigenvalue formulas.
    pub fn q_b_t_rho_inv(weyl: &Weyl, b: &Weight) -> Self {
        Self::new(&weyl.rs, b.clone(), WElem::identity(&weyl.rs))
    }

    /// Value of the monomial `x_a` at the point:
    /// `q^((a,b)) prod_nu t_nu^(-(w(rho_nu), a))`.
    pub fn eval_monomial(&self, rs: &RootSystem, a: &Weight) -> Result<C> {
        let qe = rs.pair_ww(a, &self.b);
        let mut out = q_pow(rs, &qe)?;
        for class in 0..rs.n_classes() {
            let acoords: Vec<Rat> = a.0.iter().map(|&x| rat_int(x)).collect();
            let te = -rs.pair_qq(&self.w_rho[class], &acoords);
            out = out.mul(&t_pow(class, &te)?);
        }
        Ok(out)
    }
}

/// Evaluate a Laurent polynomial at a spectral point.
pub fn evaluate(rs: &RootSystem, f: &LPoly, pt: &SpectralPoint) -> Result<C> {
    let mut out = C::zero();
    for (b, c) in f.terms() {
        out = out.add(&c.mul(&pt.eval_monomial(rs, b)?));
    }
    Ok(out)
}

/// Specialize `v` to the `s`-th power of a primitive `order`-th root of
/// unity, mapping a generic coefficient into the cyclotomic engine. The
/// denominator must stay nonzero.
pub fn specialize_cyclotomic(c: &C, order: u32, s: i64) -> Result<RatFun<Cyc>> {
    let subst = |p: &MPoly<Rat>| -> MPoly<Cyc> {
        let mut out = MPoly::zero();
        for (m, coef) in p.terms() {
            let mut k: Mono = *m;
            let ev = k[VAR_V] as i64;
            k[VAR_V] = 0;
            let z = Cyc::zeta_pow(order, s * ev).mul(&Cyc::rational(coef.clone()));
            out = out.add(&MPoly::monomial(z, k));
        }
        out
    };
    let den = subst(c.den());
    if den.is_zero() {
        return Err(Error::VanishingDenominator(format!("{}", c.den())));
    }
    Ok(RatFun::new(subst(c.num()), den))
}

// ---- Canonical string and JSON forms ----

/// Render one coefficient with `q`/`ts`/`tl` and rational exponents
/// (`v^e -> q^(e/2m)`, `u^e -> t^(e/2)`).
pub fn coeff_string(rs: &RootSystem, c: &C) -> String {
    fn poly_string(rs: &RootSystem, p: &MPoly<Rat>) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let term_strings: Vec<String> = p
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(m, c)| {
                let mut factors: Vec<String> = Vec::new();
                let mono_trivial = m[VAR_V] == 0 && m[VAR_US] == 0 && m[VAR_UL] == 0;
                if mono_trivial || *c != <Rat as Scalar>::one() {
                    factors.push(c.to_string());
                }
                let var_name = |slot: usize| -> &'static str {
                    if slot == VAR_V {
                        "q"
                    } else if slot == VAR_US {
                        "ts"
                    } else {
                        "tl"
                    }
                };
                for slot in [VAR_V, VAR_US, VAR_UL] {
                    if m[slot] == 0 {
                        continue;
                    }
                    let e = if slot == VAR_V {
                        rat_int(m[slot] as i64) / rat_int(2 * rs.m)
                    } else {
                        rat_int(m[slot] as i64) / rat_int(2)
                    };
                    let name = var_name(slot);
                    if e == rat_int(1) {
                        factors.push(name.to_string());
                    } else if e.is_integer() {
                        factors.push(format!("{name}^{e}"));
                    } else {
                        factors.push(format!("{name}^({e})"));
                    }
                }
                factors.join("*")
            })
            .collect();
        parts.extend(term_strings);
        parts.join(" + ")
    }
    if c.den().is_one() {
        poly_string(rs, c.num())
    } else {
        format!("({})/({})", poly_string(rs, c.num()), poly_string(rs, c.den()))
    }
}

#[derive(Serialize, Deserialize)]
pub struct TermJson {
    pub weight: Vec<i64>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

/// Human-oriented JSON form with canonical coefficient strings.
pub fn poly_to_json(rs: &RootSystem, f: &LPoly) -> PolyJson {
    PolyJson {
        terms: f
            .terms()
            .map(|(b, c)| TermJson { weight: b.0.iter().copied().collect(), coeff: coeff_string(rs, c) })
            .collect(),
    }
}

// Raw exact round-trip form for the on-disk cache.

#[derive(Serialize, Deserialize)]
pub struct RawPoly {
    pub terms: Vec<(Vec<i64>, RawCoeff)>,
}

#[derive(Serialize, Deserialize)]
pub struct RawCoeff {
    pub num: Vec<(String, [i64; NVARS])>,
    pub den: Vec<(String, [i64; NVARS])>,
}

pub fn coeff_to_raw(c: &C) -> RawCoeff {
    let conv = |p: &MPoly<Rat>| -> Vec<(String, [i64; NVARS])> {
        p.terms()
            .map(|(m, c)| (c.to_string(), [m[0] as i64, m[1] as i64, m[2] as i64]))
            .collect()
    };
    RawCoeff { num: conv(c.num()), den: conv(c.den()) }
}

pub fn coeff_from_raw(r: &RawCoeff) -> Result<C> {
    let conv = |v: &[(String, [i64; NVARS])]| -> Result<MPoly<Rat>> {
        let mut p = MPoly::zero();
        for (s, m) in v {
            let c: Rat = s
                .parse()
                .map_err(|_| Error::Unsupported(format!("bad rational {s:?}")))?;
            let mono: Mono = [m[0] as u32, m[1] as u32, m[2] as u32];
            p = p.add(&MPoly::monomial(c, mono));
        }
        Ok(p)
    };
    let num = conv(&r.num)?;
    let den = conv(&r.den)?;
    if den.is_zero() {
        return Err(Error::Unsupported("zero denominator in cache".into()));
    }
    Ok(C::new(num, den))
}

pub fn poly_to_raw(f: &LPoly) -> RawPoly {
    RawPoly {
        terms: f
            .terms()
            .map(|(b, c)| (b.0.iter().copied().collect(), coeff_to_raw(c)))
            .collect(),
    }
}

pub fn poly_from_raw(r: &RawPoly) -> Result<LPoly> {
    let mut out = LPoly::zero();
    for (w, c) in &r.terms {
        out.insert_add(Weight::from_slice(w), coeff_from_raw(c)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Family;
    use crate::scalar::rat;

    fn weyl(f: Family, n: usize) -> Weyl {
        Weyl::new(RootSystem::new(f, n).unwrap())
    }

    fn wt(k: &[i64]) -> Weight {
        Weight::from_slice(k)
    }

    #[test]
    fn star_and_bar() {
        let w = weyl(Family::A, 1);
        let rs = &w.rs;
        // (q x_{b1})* = q^{-1} x_{-b1}
        let q = q_pow(rs, &rat_int(1)).unwrap();
        let f = LPoly::monomial(wt(&[1]), q.clone());
        let fs = f.star();
        assert_eq!(fs.coeff(&wt(&[-1])), q_pow(rs, &rat_int(-1)).unwrap());
        // involutions
        assert_eq!(fs.star(), f);
        assert_eq!(f.bar().bar(), f);
        // star of 1 is 1
        assert_eq!(LPoly::one(1).star(), LPoly::one(1));
        // bar keeps coefficients: (q x_b)^bar = q x_{-b}
        assert_eq!(f.bar().coeff(&wt(&[-1])), q);
    }

    #[test]
    fn evaluation_examples() {
        let w = weyl(Family::A, 1);
        let rs = &w.rs;
        // X_{a_1}(t^rho) = t_1: the positive-rho point is (b=0, w=id) with +rho,
        // here realized as t^{-rho} at -a_1.
        let trho_inv = SpectralPoint::t_rho_inv(&w);
        let a1 = wt(&[2]);
        // x_{a_1}(t^{-rho}) = t^{-(rho, a_1)} = t^{-1} => at t^{rho} it is t.
        let v = trho_inv.eval_monomial(rs, &a1.neg()).unwrap();
        assert_eq!(v, t_pow(0, &rat_int(1)).unwrap());
        // A1: x_{b_1}(t^{-rho}) = t^{-1/2} = u^{-1}
        let vb = trho_inv.eval_monomial(rs, &wt(&[1])).unwrap();
        assert_eq!(vb, t_half(0, false));
        // evaluate(1, pt) = 1
        assert!(evaluate(rs, &LPoly::one(1), &trho_inv).unwrap().is_one());
        // multiplicativity on a product of monomials
        let pt = SpectralPoint::sharp(&w, &wt(&[1]));
        let f = LPoly::x(&wt(&[1]));
        let g = LPoly::x(&wt(&[-2]));
        let lhs = evaluate(rs, &f.mul(&g), &pt).unwrap();
        let rhs = evaluate(rs, &f, &pt).unwrap().mul(&evaluate(rs, &g, &pt).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sharp_point_a1() {
        // x_{b1}(#b1) = q^{1/2} t^{1/2}
        let w = weyl(Family::A, 1);
        let pt = SpectralPoint::sharp(&w, &wt(&[1]));
        let v = pt.eval_monomial(&w.rs, &wt(&[1])).unwrap();
        let expect = q_pow(&w.rs, &rat(1, 2)).unwrap().mul(&t_half(0, true));
        assert_eq!(v, expect);
    }

    #[test]
    fn spectral_points_separate_small_a1() {
        let w = weyl(Family::A, 1);
        let mut vals = Vec::new();
        for k in -3i64..=3 {
            let pt = SpectralPoint::sharp(&w, &wt(&[k]));
            vals.push(pt.eval_monomial(&w.rs, &wt(&[1])).unwrap());
        }
        for i in 0..vals.len() {
            for j in 0..i {
                assert_ne!(vals[i], vals[j], "spectral collision {i} {j}");
            }
        }
    }

    #[test]
    fn constant_term_examples() {
        let w = weyl(Family::A, 1);
        let rs = &w.rs;
        assert!(LPoly::one(1).constant_term().is_one());
        assert!(LPoly::x(&wt(&[1])).constant_term().is_zero());
        // <(1 - x_a)(1 - x_a^{-1} q)> = 1 + q  (A1, a = a_1 = 2 b_1)
        let a = wt(&[2]);
        let one = LPoly::one(1);
        let f = one.sub(&LPoly::x(&a));
        let g = one.sub(&LPoly::monomial(a.neg(), q_pow(rs, &rat_int(1)).unwrap()));
        let ct = f.mul(&g).constant_term();
        assert_eq!(ct, C::one().add(&q_pow(rs, &rat_int(1)).unwrap()));
    }

    #[test]
    fn qk_specialization() {
        let w = weyl(Family::A, 1);
        // t = q: u -> v^(2m k / nu) = v^2 (m=2, nu=2, k=1)
        let c = t_half(0, true);
        let s = specialize_coeff_t_qk(&w.rs, &c, &[1]);
        assert_eq!(s, q_pow(&w.rs, &rat(1, 2)).unwrap());
    }

    #[test]
    fn cyclotomic_specialization() {
        let w = weyl(Family::A, 1);
        // (1 - q^3)/(1 - q) at a primitive cube root: numerator vanishes -> 0.
        let q = q_pow(&w.rs, &rat_int(1)).unwrap();
        let num = C::one().sub(&q.pow(3));
        let den = C::one().sub(&q);
        let f = num.div(&den);
        // v = zeta, and q = v^{2m} = zeta^4 = zeta (order 3)
        let s = specialize_cyclotomic(&f, 3, 1).unwrap();
        assert!(s.is_zero());
        // the reciprocal specializes to an error
        let g = den.div(&C::one().sub(&q.pow(3)));
        assert!(specialize_cyclotomic(&g, 3, 1).is_err());
        // plain values survive
        assert!(specialize_cyclotomic(&C::one(), 3, 1).unwrap().is_one());
    }

    #[test]
    fn json_and_cache_roundtrip() {
        let w = weyl(Family::B, 2);
        let rs = &w.rs;
        let c = q_pow(rs, &rat(1, 2))
            .unwrap()
            .mul(&t_half(1, false))
            .add(&C::from_i64(-3));
        let f = LPoly::monomial(wt(&[1, -2]), c);
        let json = serde_json::to_string(&poly_to_json(rs, &f)).unwrap();
        assert!(json.contains("\"weight\":[1,-2]"));
        let raw = poly_to_raw(&f);
        let back = poly_from_raw(&raw).unwrap();
        assert_eq!(back, f);
        let s = serde_json::to_string(&raw).unwrap();
        let raw2: RawPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(poly_from_raw(&raw2).unwrap(), f);
    }

    #[test]
    fn coeff_strings() {
        let w = weyl(Family::A, 1);
        let rs = &w.rs;
        let c = q_pow(rs, &rat(1, 2)).unwrap();
        assert_eq!(coeff_string(rs, &c), "q^(1/2)");
        let d = t_half(0, true).mul(&C::from_i64(2));
        assert_eq!(coeff_string(rs, &d), "2*tl^(1/2)");
        let e = C::one().div(&C::one().sub(&q_pow(rs, &rat_int(1)).unwrap()));
        assert_eq!(coeff_string(rs, &e), "(-1)/(q + -1)");
    }
}
