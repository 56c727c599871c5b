//! Nonsymmetric Macdonald polynomials and their spectral theory.
//!
//! `e_b` is computed as the unique joint eigenvector of the commuting
//! `Y`-operators inside the finite cone window of `b`, normalized to leading
//! term `x_b`. The triangular Gram-Schmidt construction against the weight
//! function at `t = q^k` is kept as an independent oracle. On top of the
//! polynomials sit the Fourier pairing and its duality, the closed evaluation
//! and norm products, recurrence/Pieri expansions in the normalized basis,
//! the symmetrizations, and the rank-one shift-operator check.

use crate::coeffs::{
    evaluate, q_pow, specialize_coeff_t_qk, t_half, LPoly, SpectralPoint, C,
};
use crate::linalg::Matrix;
use crate::ops::{Algebra, SignSet};
use crate::rootsys::Weight;
use crate::scalar::{rat_int, Rat};
use crate::weyl::ExtElem;
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A computed nonsymmetric Macdonald polynomial.
#[derive(Clone, Debug)]
pub struct EPoly {
    pub b: Weight,
    pub poly: LPoly,
    pub spectral: SpectralPoint,
    /// `e_b(t^{-rho})`.
    pub eval_at_rho: C,
}

impl EPoly {
    /// The normalized polynomial `e_b / e_b(t^{-rho})`.
    pub fn normalized(&self) -> LPoly {
        self.poly.scale(&self.eval_at_rho.inv())
    }
}

/// One term of a Pieri expansion.
#[derive(Clone, Debug)]
pub struct PieriExpansion {
    pub a: Weight,
    pub b: Weight,
    pub terms: Vec<(Weight, C)>,
}

/// The weight function at `t_nu = q_nu^{k_nu}` and its normalization.
#[derive(Clone, Debug)]
pub struct MuData {
    pub k: Vec<i64>,
    pub mu: LPoly,
    /// `<mu>`, the constant term.
    pub ct: C,
}

pub struct Macdonald {
    pub alg: Algebra,
    cache: Mutex<HashMap<Weight, Arc<EPoly>>>,
}

impl Macdonald {
    pub fn new(alg: Algebra) -> Self {
        Macdonald { alg, cache: Mutex::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    /// The spectral point `#b`.
    pub fn spectral_point(&self, b: &Weight) -> SpectralPoint {
        SpectralPoint::sharp(&self.alg.weyl, b)
    }

    /// Joint `Y`-eigenvalue `x_{-a}(#b)` of `e_b` for `Y_a`.
    pub fn eigenvalue(&self, b: &Weight, a: &Weight) -> C {
        self.spectral_point(b)
            .eval_monomial(self.alg.rs(), &a.neg())
            .expect("spectral exponents are integral")
    }

    /// Compute (and cache) `e_b` by the triangular eigenvector solve.
    pub fn compute_e(&self, b: &Weight) -> Result<Arc<EPoly>> {
        if let Some(hit) = self.cache.lock().unwrap().get(b) {
            return Ok(hit.clone());
        }
        let e = Arc::new(self.compute_e_uncached(b)?);
        self.cache
            .lock()
            .unwrap()
            .entry(b.clone())
            .or_insert_with(|| e.clone());
        Ok(e)
    }

    fn compute_e_uncached(&self, b: &Weight) -> Result<EPoly> {
        let n = self.rank();
        let window = self.alg.weyl.sigma(b);
        let len = window.len();
        let index: HashMap<Weight, usize> =
            window.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

        // Spectral separation: the joint eigenvalue lists must be distinct.
        let mut spectra: Vec<Vec<C>> = Vec::with_capacity(len);
        for c in &window {
            let pt = self.spectral_point(c);
            let evs: Result<Vec<C>> = (0..n)
                .map(|i| pt.eval_monomial(self.alg.rs(), &Weight::basis(n, i).neg()))
                .collect();
            spectra.push(evs?);
        }
        for i in 0..len {
            for j in 0..i {
                if spectra[i] == spectra[j] {
                    return Err(Error::SingularSystem(format!(
                        "spectral collision between {:?} and {:?}",
                        window[i], window[j]
                    )));
                }
            }
        }

        if len == 1 {
            let poly = LPoly::x(b);
            let eval_at_rho =
                evaluate(self.alg.rs(), &poly, &SpectralPoint::t_rho_inv(&self.alg.weyl))?;
            return Ok(EPoly {
                b: b.clone(),
                poly,
                spectral: self.spectral_point(b),
                eval_at_rho,
            });
        }

        // Stack (Y_i - lambda_i) restricted to the window; unknowns are the
        // coefficients at window[1..], with coefficient 1 at window[0] = b.
        let mut rows: Vec<Vec<C>> = Vec::new();
        let mut rhs: Vec<C> = Vec::new();
        for i in 0..n {
            let ai = Weight::basis(n, i);
            let lambda = &spectra[0][i];
            // column images
            let mut cols: Vec<LPoly> = Vec::with_capacity(len);
            for c in &window {
                cols.push(self.alg.apply_y(&ai, &LPoly::x(c)));
            }
            for r in 0..len {
                let mut row = Vec::with_capacity(len - 1);
                let mut rv = C::zero();
                for (ci, c) in window.iter().enumerate() {
                    let mut entry = cols[ci].coeff(&window[r]);
                    // Stray support means the cone enumeration is broken.
                    for (w, _) in cols[ci].terms() {
                        assert!(
                            index.contains_key(w),
                            "Y left the cone window: {w:?} from {c:?}"
                        );
                    }
                    if ci == r {
                        entry = entry.sub(lambda);
                    }
                    if ci == 0 {
                        rv = entry.neg();
                    } else {
                        row.push(entry);
                    }
                }
                rows.push(row);
                rhs.push(rv);
            }
        }
        let mat = Matrix::from_rows(rows);
        let sol = mat
            .solve_unique(&rhs)
            .ok_or_else(|| Error::SingularSystem(format!("eigenvector solve for {b:?}")))?;
        let mut poly = LPoly::x(b);
        for (i, c) in window.iter().enumerate().skip(1) {
            poly.insert_add(c.clone(), sol[i - 1].clone());
        }
        let eval_at_rho =
            evaluate(self.alg.rs(), &poly, &SpectralPoint::t_rho_inv(&self.alg.weyl))?;
        Ok(EPoly { b: b.clone(), poly, spectral: self.spectral_point(b), eval_at_rho })
    }

    /// Independent oracle: triangular orthogonalization against the weight
    /// function at `t = q^k` (where the weight function is a finite Laurent
    /// polynomial). Returns `e_b` with specialized coefficients.
    pub fn gram_schmidt_e(&self, b: &Weight, k: &[i64]) -> Result<LPoly> {
        let mu = self.mu_data(k);
        let window = self.alg.weyl.sigma(b);
        let len = window.len();
        if len == 1 {
            return Ok(LPoly::x(b));
        }
        // <x_d, x_c> = ct(mu x_d x_{-c}) = coeff of x_{c-d} in mu.
        let gram = |c: &Weight, d: &Weight| -> C { mu.mu.coeff(&c.sub(d)) };
        let mut rows: Vec<Vec<C>> = Vec::new();
        let mut rhs: Vec<C> = Vec::new();
        for c in window.iter().skip(1) {
            let mut row = Vec::with_capacity(len - 1);
            for d in window.iter().skip(1) {
                row.push(gram(c, d));
            }
            rows.push(row);
            rhs.push(gram(c, &window[0]).neg());
        }
        let mat = Matrix::from_rows(rows);
        let sol = mat
            .solve_unique(&rhs)
            .ok_or_else(|| Error::SingularSystem(format!("gram-schmidt at t=q^k for {b:?}")))?;
        let mut poly = LPoly::x(b);
        for (i, c) in window.iter().enumerate().skip(1) {
            poly.insert_add(c.clone(), sol[i - 1].clone());
        }
        Ok(poly)
    }

    /// The Fourier pairing `[[f, g]] = (fbar(Y) g)(t^{-rho})`.
    pub fn fourier_pairing(&self, f: &LPoly, g: &LPoly) -> Result<C> {
        let mut acc = LPoly::zero();
        for (b, c) in f.terms() {
            let img = self.alg.apply_y(&b.neg(), g);
            acc = acc.add(&img.scale(c));
        }
        evaluate(self.alg.rs(), &acc, &SpectralPoint::t_rho_inv(&self.alg.weyl))
    }

    /// Verify `e_b(#c) e_c(#) = e_c(#b) e_b(#)`, returning both sides.
    pub fn duality_pair(&self, b: &Weight, c: &Weight) -> Result<(C, C)> {
        let eb = self.compute_e(b)?;
        let ec = self.compute_e(c)?;
        let rs = self.alg.rs();
        let lhs = evaluate(rs, &eb.poly, &ec.spectral)?.mul(&ec.eval_at_rho);
        let rhs = evaluate(rs, &ec.poly, &eb.spectral)?.mul(&eb.eval_at_rho);
        Ok((lhs, rhs))
    }

    pub fn duality_check(&self, b: &Weight, c: &Weight) -> Result<bool> {
        let (l, r) = self.duality_pair(b, c)?;
        Ok(l == r)
    }

    /// Index set of the closed evaluation/norm products for one positive
    /// coroot: `0 < j < (alpha, b+)` when `(alpha^vee, b^o) > 0`, with the
    /// boundary included otherwise (`b^o = -w0(b)`); the zero-pairing branch
    /// is fixed by exhaustive agreement with the eigenvector solve.
    fn j_range(&self, b: &Weight, root: usize) -> (i64, bool) {
        let weyl = &self.alg.weyl;
        let bp = weyl.orbit_extremes(b).1;
        let bo = weyl.w0.act_weight(b).neg();
        let top = self.alg.rs().pair_w_root(&bp, root);
        let strict = self.alg.rs().pair_w_coroot(&bo, root) > 0;
        (top, strict)
    }

    /// Closed product for `e_b(t^{-rho})`.
    pub fn eval_formula(&self, b: &Weight) -> Result<C> {
        let rs = self.alg.rs();
        let weyl = &self.alg.weyl;
        let bm = weyl.orbit_extremes(b).0;
        // x_{b_-}(t^{rho}) = x_{-b_-}(t^{-rho})
        let trho_inv = SpectralPoint::t_rho_inv(weyl);
        let mut out = trho_inv.eval_monomial(rs, &bm.neg())?;
        for &root in &rs.positive {
            let a = rs.coroot_weight(root);
            let class = rs.roots[root].class;
            let xa = trho_inv.eval_monomial(rs, &a.neg())?; // x_a(t^rho)
            let ta = t_half(class, true).pow(2);
            let (top, strict) = self.j_range(b, root);
            let hi = if strict { top - 1 } else { top };
            for j in 1..=hi {
                let qa = q_pow(rs, &(rat_int(2 * j) / rs.nu(class)))?;
                let num = C::one().sub(&qa.mul(&ta).mul(&xa));
                let den = C::one().sub(&qa.mul(&xa));
                out = out.mul(&num.div(&den));
            }
        }
        Ok(out)
    }

    /// Closed product for the norm `<eps_b, eps_b>`.
    pub fn norm_formula(&self, b: &Weight) -> Result<C> {
        let rs = self.alg.rs();
        let weyl = &self.alg.weyl;
        let trho_inv = SpectralPoint::t_rho_inv(weyl);
        let mut out = C::one();
        for &root in &rs.positive {
            let a = rs.coroot_weight(root);
            let class = rs.roots[root].class;
            let xa = trho_inv.eval_monomial(rs, &a.neg())?;
            let th = t_half(class, true);
            let thi = t_half(class, false);
            let (top, strict) = self.j_range(b, root);
            let hi = if strict { top - 1 } else { top };
            for j in 1..=hi {
                let qa = q_pow(rs, &(rat_int(2 * j) / rs.nu(class)))?;
                let num = th.sub(&qa.mul(&thi).mul(&xa));
                let den = thi.sub(&qa.mul(&th).mul(&xa));
                out = out.mul(&num.div(&den));
            }
        }
        Ok(out)
    }

    /// The weight function at `t = q^k` as a Laurent polynomial, with its
    /// constant term.
    pub fn mu_data(&self, k: &[i64]) -> MuData {
        let rs = self.alg.rs();
        let n = self.rank();
        let one = LPoly::one(n);
        let mut mu = one.clone();
        for &root in &rs.positive {
            let a = rs.coroot_weight(root);
            let class = rs.roots[root].class;
            let ka = k[class];
            for i in 0..ka {
                let q = q_pow(rs, &(rat_int(2 * i) / rs.nu(class))).unwrap();
                mu = mu.mul(&one.sub(&LPoly::monomial(a.clone(), q)));
            }
            for i in 1..=ka {
                let q = q_pow(rs, &(rat_int(2 * i) / rs.nu(class))).unwrap();
                mu = mu.mul(&one.sub(&LPoly::monomial(a.neg(), q)));
            }
        }
        let ct = mu.constant_term();
        MuData { k: k.to_vec(), mu, ct }
    }

    /// `<f, g> = <mu_1 f g*>` for the weight data (coefficients of `f, g`
    /// must already be specialized to the same `t = q^k`).
    pub fn inner_product(&self, mu: &MuData, f: &LPoly, g: &LPoly) -> C {
        mu.mu.mul(f).mul(&g.star()).constant_term().div(&mu.ct)
    }

    /// Closed constant-term product at `t = q^k` (the telescoped form of the
    /// infinite product).
    pub fn constant_term_formula(&self, k: &[i64]) -> Result<C> {
        let rs = self.alg.rs();
        let trho_inv = SpectralPoint::t_rho_inv(&self.alg.weyl);
        let mut out = C::one();
        for &root in &rs.positive {
            let a = rs.coroot_weight(root);
            let class = rs.roots[root].class;
            let xa = specialize_coeff_t_qk(rs, &trho_inv.eval_monomial(rs, &a.neg())?, k);
            let ka = k[class];
            for i in 1..=ka {
                let q = q_pow(rs, &(rat_int(2 * i) / rs.nu(class)))?;
                out = out.mul(&C::one().sub(&q.mul(&xa)));
            }
            for i in 0..ka {
                let q = q_pow(rs, &(rat_int(-2 * i) / rs.nu(class)))?;
                out = out.div(&C::one().sub(&q.mul(&xa)));
            }
        }
        Ok(out)
    }

    /// Check the constant-term product against the direct expansion; the
    /// truncation bound `m` must dominate every `k_nu`.
    pub fn constant_term_check(&self, k: &[i64], m: i64) -> Result<bool> {
        if k.iter().any(|&ka| ka > m) {
            return Err(Error::WindowExhausted(
                "truncation must dominate the specialization exponents".into(),
            ));
        }
        let direct = self.mu_data(k).ct;
        let formula = specialize_coeff_t_qk(self.alg.rs(), &self.constant_term_formula(k)?, k);
        Ok(direct == formula)
    }

    /// Expand `x_a * eps_b` in the normalized basis by peeling minimal
    /// support weights.
    pub fn pieri_expand(&self, a: &Weight, b: &Weight) -> Result<PieriExpansion> {
        let eb = self.compute_e(b)?;
        let mut f = eb.normalized().mul_monomial(a, &C::one());
        let weyl = &self.alg.weyl;
        let mut terms: Vec<(Weight, C)> = Vec::new();
        // Predicted index window from the cone geometry of the Y-expansion.
        let sigma_a = weyl.sigma(a);
        let mut allowed: Vec<Weight> = Vec::new();
        for c in &sigma_a {
            for w in weyl.all_w() {
                allowed.push(c.add(&w.act_weight(b)));
            }
        }
        let mut guard = 0usize;
        while !f.is_zero() {
            guard += 1;
            if guard > 10_000 {
                return Err(Error::WindowExhausted(format!("pieri peel for a={a:?} b={b:?}")));
            }
            // minimal support weight in the linear extension
            let c = f
                .support()
                .into_iter()
                .min_by_key(|c| {
                    let cp = weyl.orbit_extremes(c).1;
                    (-weyl.height2(&cp), weyl.height2(c), c.clone())
                })
                .unwrap();
            let ec = self.compute_e(&c)?;
            let kappa = f.coeff(&c).mul(&ec.eval_at_rho);
            f = f.sub(&ec.normalized().scale(&kappa));
            if !kappa.is_zero() {
                if !allowed.contains(&c) {
                    return Err(Error::RelationFailed(format!(
                        "pieri index {c:?} escaped the predicted window"
                    )));
                }
                terms.push((c, kappa));
            }
        }
        Ok(PieriExpansion { a: a.clone(), b: b.clone(), terms })
    }

    /// Reassemble a Pieri expansion and compare with `x_a eps_b` exactly.
    pub fn pieri_verify(&self, exp: &PieriExpansion) -> Result<bool> {
        let eb = self.compute_e(&exp.b)?;
        let target = eb.normalized().mul_monomial(&exp.a, &C::one());
        let mut acc = LPoly::zero();
        for (c, kappa) in &exp.terms {
            let ec = self.compute_e(c)?;
            acc = acc.add(&ec.normalized().scale(kappa));
        }
        Ok(acc == target)
    }

    /// The prefactor product of the intertwiner reconstruction of `e_{b_-}`.
    pub fn phie_prefactor(&self, b: &Weight, eps: &SignSet) -> Result<C> {
        let rs = self.alg.rs();
        let pt = self.spectral_point(b);
        let mut out = C::one();
        for &root in &rs.positive {
            if rs.pair_w_root(b, root) <= 0 {
                continue;
            }
            let class = rs.roots[root].class;
            let a = rs.coroot_weight(root);
            let sgn = eps.sign(class);
            let xa = pt.eval_monomial(rs, &if sgn == 1 { a.clone() } else { a.neg() })?;
            let ta = t_half(class, true).pow(2);
            let num = ta.sub(&xa);
            let den = C::one().sub(&xa);
            if den.is_zero() {
                return Err(Error::WallSingularity("phie denominator vanished".into()));
            }
            let mut factor = num.div(&den);
            if sgn == -1 {
                factor = factor.neg();
            }
            out = out.mul(&factor);
        }
        Ok(out)
    }

    /// Rebuild `e_{b_-}` from `e_b` through the intertwiner chain along
    /// `omega_b`, with the closed prefactor; returns both sides.
    pub fn phie_reconstruct(&self, b: &Weight, eps: &SignSet) -> Result<(LPoly, LPoly)> {
        let weyl = &self.alg.weyl;
        let (bm, omega) = weyl.to_antidominant(b);
        eps.check_for(self.alg.rs(), &bm)?;
        let (pi_idx, word) = weyl.reduced_word(&ExtElem::finite(omega.clone(), self.rank()));
        debug_assert_eq!(pi_idx, 0);
        let eb = self.compute_e(b)?;
        let mut cur = eb.poly.clone();
        let mut cur_b = b.clone();
        for &j in &word {
            debug_assert!(j >= 1);
            let pt = self.spectral_point(&cur_b);
            cur = self.alg.apply_intertwiner(j, eps, &cur, &pt)?;
            cur_b = self.alg.rs().reflect_weight(&cur_b, j - 1);
        }
        debug_assert_eq!(cur_b, bm);
        let lhs = cur.scale(&self.phie_prefactor(b, eps)?);
        let rhs = self.compute_e(&bm)?.poly.clone();
        Ok((lhs, rhs))
    }

    /// The symmetrization of `e_{b_-}` expanded in the basis `{e_c}` of the
    /// orbit, normalized so the coefficient of `e_{b_-}` is 1. Returns the
    /// polynomial and the expansion coefficients.
    pub fn symmetric_p(&self, bm: &Weight, eps: &SignSet) -> Result<(LPoly, Vec<(Weight, C)>)> {
        let weyl = &self.alg.weyl;
        if !self.alg.rs().is_antidominant(bm) {
            return Err(Error::Unsupported("symmetric_p expects an antidominant index".into()));
        }
        eps.check_for(self.alg.rs(), bm)?;
        let ebm = self.compute_e(bm)?;
        let mut f = self.alg.symmetrize(eps, &ebm.poly);
        // Expand within the orbit, peeling minimal weights.
        let mut orbit = weyl.orbit(bm);
        orbit.sort_by_key(|c| {
            (-weyl.height2(&weyl.orbit_extremes(c).1), weyl.height2(c), c.clone())
        });
        let mut coeffs: Vec<(Weight, C)> = Vec::new();
        for c in &orbit {
            let kappa = f.coeff(c);
            if kappa.is_zero() {
                coeffs.push((c.clone(), C::zero()));
                continue;
            }
            let ec = self.compute_e(c)?;
            f = f.sub(&ec.poly.scale(&kappa));
            coeffs.push((c.clone(), kappa));
        }
        if !f.is_zero() {
            return Err(Error::RelationFailed(
                "symmetrization did not close on the orbit basis".into(),
            ));
        }
        let lead = coeffs
            .iter()
            .find(|(c, _)| c == bm)
            .map(|(_, k)| k.clone())
            .expect("orbit contains b_-");
        if lead.is_zero() {
            return Err(Error::SingularSystem("vanishing leading symmetrization".into()));
        }
        let inv = lead.inv();
        let coeffs: Vec<(Weight, C)> =
            coeffs.into_iter().map(|(c, k)| (c, k.mul(&inv))).collect();
        let mut p = LPoly::zero();
        for (c, k) in &coeffs {
            if !k.is_zero() {
                p = p.add(&self.compute_e(c)?.poly.scale(k));
            }
        }
        Ok((p, coeffs))
    }

    /// The closed symmetrization coefficient of `e_c` inside `p_{b_-}`.
    pub fn psym_coefficient(&self, c: &Weight, eps: &SignSet) -> Result<C> {
        self.phie_prefactor(c, eps)
    }

    /// Exact division of Laurent polynomials (leading-term elimination);
    /// `None` when the division leaves a remainder.
    pub fn lp_div_exact(&self, f: &LPoly, d: &LPoly) -> Option<LPoly> {
        let lead = |p: &LPoly| -> Option<Weight> { p.support().into_iter().max() };
        let dl = lead(d)?;
        let dc = d.coeff(&dl);
        let mut rem = f.clone();
        let mut quot = LPoly::zero();
        while !rem.is_zero() {
            let rl = lead(&rem).unwrap();
            let qw = rl.sub(&dl);
            let qc = rem.coeff(&rl).div(&dc);
            let t = LPoly::monomial(qw, qc);
            quot = quot.add(&t);
            rem = rem.sub(&d.mul(&t));
            if quot.num_terms() > 4 * (f.num_terms() + d.num_terms() + 4) {
                return None;
            }
        }
        Some(quot)
    }

    /// Shift-operator check at rank 1: `p^(-)_{b_-} / det_t` must be
    /// proportional to the plus-symmetrization for `t' = t q` at the shifted
    /// weight. Returns the matching shifted weight and the constant.
    pub fn shift_check(&self, bm: &Weight) -> Result<(Weight, C)> {
        let rs = self.alg.rs();
        if rs.rank != 1 {
            return Err(Error::Unsupported("shift check is a rank-1 computation".into()));
        }
        let (p_minus, _) = self.symmetric_p(bm, &SignSet::minus(rs.n_classes()))?;
        // det_t = (t x_a)^(1/2) - (t x_a)^(-1/2) with a = alpha_1 = 2 b_1:
        // = t^(1/2) x - t^(-1/2) x^(-1).
        let det_t = LPoly::monomial(Weight::from_slice(&[1]), t_half(0, true)).sub(
            &LPoly::monomial(Weight::from_slice(&[-1]), t_half(0, false)),
        );
        let quot = self
            .lp_div_exact(&p_minus, &det_t)
            .ok_or_else(|| Error::RelationFailed("p^(-) not divisible by det_t".into()))?;
        // Candidate shifts: b' = b_- + rho (rho = b_1 for A1).
        let rho = Weight::from_slice(&[1]);
        let bshift = bm.add(&rho);
        let (target, _) = self.symmetric_p(&bshift, &SignSet::plus(rs.n_classes()))?;
        // Substitute t -> t q in the target: u -> u v^m.
        let target_shifted = shift_t_by_q(&target, rs.m);
        match proportionality(&quot, &target_shifted) {
            Some(c) => Ok((bshift, c)),
            None => Err(Error::RelationFailed(
                "quotient is not proportional to the shifted symmetric polynomial".into(),
            )),
        }
    }
}

/// Substitute `t_nu -> t_nu q_nu` in every coefficient: `u -> u v^(2m/nu)`.
pub fn shift_t_by_q(f: &LPoly, m: i64) -> LPoly {
    // For the rank-1 use, nu = 2 and u -> u v^m. Implemented via exponent
    // rewriting on both numerator and denominator.
    let mut out = LPoly::zero();
    for (b, c) in f.terms() {
        let map = |p: &crate::mpoly::MPoly<Rat>| -> crate::mpoly::MPoly<Rat> {
            let mut q = crate::mpoly::MPoly::zero();
            for (mono, coef) in p.terms() {
                let mut k = *mono;
                k[crate::mpoly::VAR_V] += (m as u32) * mono[crate::coeffs::u_slot(0)];
                q = q.add(&crate::mpoly::MPoly::monomial(coef.clone(), k));
            }
            q
        };
        let num = map(c.num());
        let den = map(c.den());
        out.insert_add(b.clone(), crate::ratfun::RatFun::new(num, den));
    }
    out
}

/// If `f = c * g` for a constant coefficient `c`, return it.
pub fn proportionality(f: &LPoly, g: &LPoly) -> Option<C> {
    if g.is_zero() {
        return if f.is_zero() { Some(C::zero()) } else { None };
    }
    let sup = g.support();
    let w0 = sup.first()?;
    let c = f.coeff(w0).div(&g.coeff(w0));
    if f == &g.scale(&c) {
        Some(c)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::t_half_diff;
    use crate::rootsys::{Family, RootSystem};
    use crate::weyl::Weyl;

    fn mac(f: Family, n: usize) -> Macdonald {
        Macdonald::new(Algebra::new(Weyl::new(RootSystem::new(f, n).unwrap())))
    }

    fn wt(k: &[i64]) -> Weight {
        Weight::from_slice(k)
    }

    fn qp(m: &Macdonald, n: i64, d: i64) -> C {
        q_pow(m.alg.rs(), &crate::scalar::rat(n, d)).unwrap()
    }

    /// t as a coefficient (long class).
    fn tc() -> C {
        t_half(0, true).pow(2)
    }

    #[test]
    fn rank1_polynomials() {
        let m = mac(Family::A, 1);
        // e_0 = 1
        assert_eq!(m.compute_e(&wt(&[0])).unwrap().poly, LPoly::one(1));
        // e_{b1} = x
        assert_eq!(m.compute_e(&wt(&[1])).unwrap().poly, LPoly::x(&wt(&[1])));
        // e_{-b1} = x^{-1} + (t-1)/(qt-1) x
        let e = m.compute_e(&wt(&[-1])).unwrap();
        let q = qp(&m, 1, 1);
        let c = tc().sub(&C::one()).div(&q.mul(&tc()).sub(&C::one()));
        let expect = LPoly::x(&wt(&[-1])).add(&LPoly::monomial(wt(&[1]), c));
        assert_eq!(e.poly, expect);
        // eigenvalue checks: Y e_b = x_{-b_1}(#b) e_b
        for k in -2i64..=2 {
            let e = m.compute_e(&wt(&[k])).unwrap();
            let ev = m.eigenvalue(&wt(&[k]), &wt(&[1]));
            assert_eq!(m.alg.apply_y(&wt(&[1]), &e.poly), e.poly.scale(&ev), "k={k}");
        }
    }

    #[test]
    fn rank1_evaluations() {
        let m = mac(Family::A, 1);
        // e_{b1}(t^{-rho}) = t^{-1/2}
        let e1 = m.compute_e(&wt(&[1])).unwrap();
        assert_eq!(e1.eval_at_rho, t_half(0, false));
        // e_{-b1}(t^{-rho}) = t^{-1/2} (1 - q t^2)/(1 - q t)
        let em = m.compute_e(&wt(&[-1])).unwrap();
        let q = qp(&m, 1, 1);
        let expect = t_half(0, false)
            .mul(&C::one().sub(&q.mul(&tc().pow(2))))
            .div(&C::one().sub(&q.mul(&tc())));
        assert_eq!(em.eval_at_rho, expect);
        // closed formula agrees on a strip
        for k in -3i64..=3 {
            let e = m.compute_e(&wt(&[k])).unwrap();
            assert_eq!(m.eval_formula(&wt(&[k])).unwrap(), e.eval_at_rho, "k={k}");
        }
    }

    #[test]
    fn gram_schmidt_oracle_rank1() {
        let m = mac(Family::A, 1);
        for k in [1i64, 2] {
            for b in [-2i64, -1, 1, 2] {
                let direct = m
                    .compute_e(&wt(&[b]))
                    .unwrap()
                    .poly
                    .specialize_t_qk(m.alg.rs(), &[k]);
                let oracle = m.gram_schmidt_e(&wt(&[b]), &[k]).unwrap();
                assert_eq!(direct, oracle, "k={k} b={b}");
            }
        }
    }

    #[test]
    fn mu_constant_terms() {
        let m = mac(Family::A, 1);
        // A1, k=1: mu = (1 - x_a)(1 - x_a^{-1} q), <mu> = 1 + q
        let mu = m.mu_data(&[1]);
        let q = qp(&m, 1, 1);
        assert_eq!(mu.ct, C::one().add(&q));
        // A1, k=2: <mu> = 1 + q + 2 q^2 + q^3 + q^4
        let mu2 = m.mu_data(&[2]);
        let expect = C::one()
            .add(&q)
            .add(&q.pow(2).mul(&C::from_i64(2)))
            .add(&q.pow(3))
            .add(&q.pow(4));
        assert_eq!(mu2.ct, expect);
        // <mu_1> = 1 and mu_1^* = mu_1
        let mu1 = mu.mu.scale(&mu.ct.inv());
        assert!(mu1.constant_term().is_one());
        assert_eq!(mu1.star(), mu1);
        // telescoped formula matches
        assert!(m.constant_term_check(&[1], 4).unwrap());
        assert!(m.constant_term_check(&[2], 4).unwrap());
    }

    #[test]
    fn duality_rank1_grid() {
        let m = mac(Family::A, 1);
        for b in -3i64..=3 {
            for c in b..=3 {
                assert!(m.duality_check(&wt(&[b]), &wt(&[c])).unwrap(), "b={b} c={c}");
            }
        }
        // Fourier pairing: [[1, g]] = g(t^{-rho}); symmetry [[f,g]] = [[g,f]].
        let g = m.compute_e(&wt(&[-2])).unwrap().poly.clone();
        let f = m.compute_e(&wt(&[1])).unwrap().poly.clone();
        let one = LPoly::one(1);
        assert_eq!(
            m.fourier_pairing(&one, &g).unwrap(),
            evaluate(m.alg.rs(), &g, &SpectralPoint::t_rho_inv(&m.alg.weyl)).unwrap()
        );
        assert_eq!(
            m.fourier_pairing(&f, &g).unwrap(),
            m.fourier_pairing(&g, &f).unwrap()
        );
        // [[e_b, e_c]] = e_b(#c) e_c(#)
        let (lhs, _) = m.duality_pair(&wt(&[1]), &wt(&[-2])).unwrap();
        assert_eq!(m.fourier_pairing(&f, &g).unwrap(), lhs);
    }

    #[test]
    fn norms_match_pairing_rank1() {
        let m = mac(Family::A, 1);
        // closed form at b = -b1: t(1-q)/(1-q t^2) evaluated... against the
        // mu-pairing at t = q and t = q^2.
        for k in [1i64, 2] {
            let mu = m.mu_data(&[k]);
            for b in [-2i64, -1, 0, 1, 2] {
                let e = m.compute_e(&wt(&[b])).unwrap();
                let eps = e
                    .normalized()
                    .specialize_t_qk(m.alg.rs(), &[k]);
                let direct = m.inner_product(&mu, &eps, &eps);
                let formula =
                    specialize_coeff_t_qk(m.alg.rs(), &m.norm_formula(&wt(&[b])).unwrap(), &[k]);
                assert_eq!(direct, formula, "k={k} b={b}");
            }
        }
        // spot value: b = -b1 generic-t formula is (t^{1/2} - q t^{-1/2} x)/(
        // t^{-1/2} - q t^{1/2} x) at x = t, i.e. t(1-q)/(1-q t^2).
        let got = m.norm_formula(&wt(&[-1])).unwrap();
        let q = qp(&m, 1, 1);
        let expect = tc()
            .mul(&C::one().sub(&q))
            .div(&C::one().sub(&q.mul(&tc().pow(2))));
        assert_eq!(got, expect);
        // b in {0, b1}: empty product
        assert!(m.norm_formula(&wt(&[0])).unwrap().is_one());
        assert!(m.norm_formula(&wt(&[1])).unwrap().is_one());
    }

    #[test]
    fn orthogonality_at_qk_rank1() {
        let m = mac(Family::A, 1);
        for k in [1i64, 2] {
            let mu = m.mu_data(&[k]);
            let polys: Vec<LPoly> = (-2i64..=2)
                .map(|b| {
                    m.compute_e(&wt(&[b]))
                        .unwrap()
                        .poly
                        .specialize_t_qk(m.alg.rs(), &[k])
                })
                .collect();
            for i in 0..polys.len() {
                for j in 0..i {
                    assert!(
                        m.inner_product(&mu, &polys[i], &polys[j]).is_zero(),
                        "k={k} i={i} j={j}"
                    );
                }
                assert!(!m.inner_product(&mu, &polys[i], &polys[i]).is_zero());
            }
            // <e_b, x_c> = 0 for c > b in the order
            for b in -2i64..=2 {
                let e = m
                    .compute_e(&wt(&[b]))
                    .unwrap()
                    .poly
                    .specialize_t_qk(m.alg.rs(), &[k]);
                for c in m.alg.weyl.sigma_star(&wt(&[b])) {
                    assert!(
                        m.inner_product(&mu, &e, &LPoly::x(&c)).is_zero(),
                        "k={k} b={b} c={c:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn w0_symmetry() {
        // w0(e_b(x^{-1})) = e_{-w0(b)}
        for (fam, n, bound) in [(Family::A, 1, 2i64), (Family::A, 2, 1)] {
            let m = mac(fam, n);
            for b in crate::ops::weight_box(n, bound) {
                let e = m.compute_e(&b).unwrap();
                let lhs = e.poly.bar().map_weights(&m.alg.weyl.w0);
                let target = m.alg.weyl.w0.act_weight(&b).neg();
                let rhs = m.compute_e(&target).unwrap();
                assert_eq!(lhs, rhs.poly, "{fam}{n} b={b:?}");
            }
        }
    }

    #[test]
    fn pieri_rank1() {
        let m = mac(Family::A, 1);
        // x^{-1} eps_0 = x^{-1}: single peel of eps_{-1} then corrections.
        let exp = m.pieri_expand(&wt(&[-1]), &wt(&[0])).unwrap();
        assert!(m.pieri_verify(&exp).unwrap());
        // all coefficients sum to the value of x^{-1} at t^{-rho}, since every
        // eps_c takes value 1 there.
        let mut sum = C::zero();
        for (_, k) in &exp.terms {
            sum = sum.add(k);
        }
        assert_eq!(sum, t_half(0, true));
        // x * eps_0 = t^{-1/2} eps_{b1}
        let exp2 = m.pieri_expand(&wt(&[1]), &wt(&[0])).unwrap();
        assert_eq!(exp2.terms.len(), 1);
        assert_eq!(exp2.terms[0].0, wt(&[1]));
        assert_eq!(exp2.terms[0].1, t_half(0, false));
        // symbolic recurrence coefficients at rank 1:
        // x eps_b = f1(#b) eps_{b+1} + f2(#b) eps_{s(b)+1}
        let q = qp(&m, 1, 1);
        let _ = q;
        for b in [-2i64, -1, 1, 2] {
            let pt = m.spectral_point(&wt(&[b]));
            let xa = pt.eval_monomial(m.alg.rs(), &wt(&[2])).unwrap();
            let f1 = t_half(0, true)
                .mul(&xa)
                .sub(&t_half(0, false))
                .div(&xa.sub(&C::one()));
            let f2 = t_half_diff(0).mul(&xa).div(&xa.sub(&C::one())).neg();
            let exp = m.pieri_expand(&wt(&[1]), &wt(&[b])).unwrap();
            let coeff_of = |w: &Weight| -> C {
                exp.terms
                    .iter()
                    .find(|(c, _)| c == w)
                    .map(|(_, k)| k.clone())
                    .unwrap_or_else(C::zero)
            };
            assert_eq!(coeff_of(&wt(&[b + 1])), f1, "f1 at b={b}");
            assert_eq!(coeff_of(&wt(&[-b + 1])), f2, "f2 at b={b}");
            assert!(m.pieri_verify(&exp).unwrap());
        }
    }

    #[test]
    fn symmetric_p_rank1() {
        let m = mac(Family::A, 1);
        let (p, coeffs) = m.symmetric_p(&wt(&[-1]), &SignSet::plus(1)).unwrap();
        // p = m_{-b1} = x + x^{-1} exactly (sigma_+ is empty here)
        let expect = LPoly::x(&wt(&[1])).add(&LPoly::x(&wt(&[-1])));
        assert_eq!(p, expect);
        // closed coefficient at e_{b1}: t(1-q)/(1-qt)
        let q = qp(&m, 1, 1);
        let kb1 = coeffs.iter().find(|(c, _)| *c == wt(&[1])).unwrap().1.clone();
        let closed = tc().mul(&C::one().sub(&q)).div(&C::one().sub(&q.mul(&tc())));
        assert_eq!(kb1, closed);
        assert_eq!(m.psym_coefficient(&wt(&[1]), &SignSet::plus(1)).unwrap(), closed);
        // W-invariance
        assert_eq!(p.map_weights(&m.alg.weyl.w0), p);
    }

    #[test]
    fn phie_reconstruction_rank1() {
        let m = mac(Family::A, 1);
        for b in [1i64, 2, 3] {
            let (lhs, rhs) = m.phie_reconstruct(&wt(&[b]), &SignSet::plus(1)).unwrap();
            assert_eq!(lhs, rhs, "b={b}");
            let (lhs, rhs) = m.phie_reconstruct(&wt(&[b]), &SignSet::minus(1)).unwrap();
            assert_eq!(lhs, rhs, "b={b} minus");
        }
    }

    #[test]
    fn shift_rank1() {
        let m = mac(Family::A, 1);
        let (bshift, c) = m.shift_check(&wt(&[-1])).unwrap();
        assert_eq!(bshift, wt(&[0]));
        // p^(-)_{-b1} = x^{-1} - t x and det_t = t^(1/2)x - t^(-1/2)x^{-1},
        // so the ratio is the constant -t^(1/2).
        assert_eq!(c, t_half(0, true).neg());
        let (bshift2, _) = m.shift_check(&wt(&[-2])).unwrap();
        assert_eq!(bshift2, wt(&[-1]));
    }
}
