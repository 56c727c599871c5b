//! Operators of the basic polynomial representation: multiplication
//! operators, the (extended) affine Weyl action, Demazure-Lusztig operators
//! `T_j`, the commuting `Y`-operators in both the `T`-word and the `G`-product
//! form, intertwiners on eigenvectors, symmetrizers, and a checker for the
//! defining relations.
//!
//! Divided differences are expanded per monomial into exact geometric sums
//! along coroot strings, so no rational-function division in `x` ever happens
//! and polynomiality holds by construction.

use crate::coeffs::{q_pow, t_half, t_half_diff, LPoly, SpectralPoint, C};
use crate::rootsys::{RootSystem, Weight};
use crate::scalar::{rat_int, Rat};
use crate::weyl::{ExtElem, Weyl};
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The basic representation attached to a root system.
pub struct Algebra {
    pub weyl: Weyl,
    /// Per affine node: the `Z`-monomial of `X_{a_j}` (weight and q-power).
    node_z: Vec<(Weight, i64)>,
    /// Per affine node: length class of `alpha_j`.
    node_class: Vec<usize>,
    /// Reduced word of the translation by `b_i`, per basis coweight.
    y_words: Vec<(usize, Vec<usize>)>,
}

/// One sign per length class for the epsilon-intertwiners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSet(pub Vec<i8>);

impl SignSet {
    pub fn plus(n_classes: usize) -> Self {
        SignSet(vec![1; n_classes])
    }

    pub fn minus(n_classes: usize) -> Self {
        SignSet(vec![-1; n_classes])
    }

    pub fn sign(&self, class: usize) -> i8 {
        self.0[class]
    }

    /// The stabilizer constraint relative to an antidominant weight: the sign
    /// must be `+1` on every class containing a simple root fixing `b_-`.
    pub fn check_for(&self, rs: &RootSystem, bm: &Weight) -> Result<()> {
        for i in 0..rs.rank {
            if bm.0[i] == 0 && self.0[rs.simple_class[i]] != 1 {
                return Err(Error::BadSignSet(i));
            }
        }
        Ok(())
    }
}

impl Algebra {
    pub fn new(weyl: Weyl) -> Self {
        let n = weyl.rs.rank;
        let mut node_z = Vec::with_capacity(n + 1);
        let mut node_class = Vec::with_capacity(n + 1);
        // Node 0: X_{a_0} = q X_theta^{-1}; theta is long.
        node_z.push((weyl.theta_covee.neg(), 1));
        node_class.push(weyl.rs.roots[weyl.rs.theta].class);
        for i in 0..n {
            let a_i = Weight(weyl.rs.acoords[i].iter().copied().collect());
            node_z.push((a_i, 0));
            node_class.push(weyl.rs.simple_class[i]);
        }
        let y_words = (0..n)
            .map(|i| weyl.reduced_word(&ExtElem::translation(&weyl.rs, &Weight::basis(n, i))))
            .collect();
        Algebra { weyl, node_z, node_class, y_words }
    }

    pub fn rs(&self) -> &RootSystem {
        &self.weyl.rs
    }

    pub fn rank(&self) -> usize {
        self.weyl.rs.rank
    }

    /// Pairing of a weight against the coroot of the node's root
    /// (`(c, alpha_j^vee)`, with `alpha_0 = [-theta, 1]`).
    fn node_pairing(&self, j: usize, c: &Weight) -> i64 {
        if j == 0 {
            -self.rs().pair_w_coroot(c, self.rs().theta)
        } else {
            c.0[j - 1]
        }
    }

    /// `Z^e x_c` for the node monomial `Z = X_{a_j}`.
    fn z_shift(&self, j: usize, c: &Weight, coef: &C, e: i64) -> (Weight, C) {
        let (zw, zq) = &self.node_z[j];
        let w = c.add(&zw.scale(e));
        let q = q_pow(self.rs(), &rat_int(zq * e)).expect("integer power");
        (w, coef.mul(&q))
    }

    /// Multiplication by `x_b q^k` with `k` in `(1/m)Z`.
    pub fn apply_x(&self, b: &Weight, qk: &Rat, f: &LPoly) -> Result<LPoly> {
        Ok(f.mul_monomial(b, &q_pow(self.rs(), qk)?))
    }

    /// Action of an extended affine Weyl element: `w(x_c) = x_{w([c,0])}`.
    pub fn apply_group(&self, e: &ExtElem, f: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (c, coef) in f.terms() {
            let img = e.w.act_weight(c);
            let qe = -self.rs().pair_ww(c, &e.t);
            let q = q_pow(self.rs(), &qe).expect("group q-power must be integral in v");
            out.insert_add(img, coef.mul(&q));
        }
        out
    }

    /// Action of `pi_r` (index into `weyl.pi`).
    pub fn apply_pi(&self, pi_idx: usize, f: &LPoly) -> LPoly {
        self.apply_group(&self.weyl.pi[pi_idx].elem.clone(), f)
    }

    /// Demazure-Lusztig operator at affine node `j` (0..=n).
    pub fn apply_t(&self, j: usize, f: &LPoly) -> LPoly {
        let class = self.node_class[j];
        let th = t_half(class, true);
        let thd = t_half_diff(class);
        let mut out = LPoly::zero();
        for (c, coef) in f.terms() {
            let d = self.node_pairing(j, c);
            // t^(1/2) s_j(x_c)
            let (w, cc) = self.z_shift(j, c, coef, -d);
            out.insert_add(w, cc.mul(&th));
            // divided-difference string
            if d > 0 {
                let neg = coef.mul(&thd).neg();
                for i in 1..=d {
                    let (w, cc) = self.z_shift(j, c, &neg, -i);
                    out.insert_add(w, cc);
                }
            } else {
                let pos = coef.mul(&thd);
                for i in 0..(-d) {
                    let (w, cc) = self.z_shift(j, c, &pos, i);
                    out.insert_add(w, cc);
                }
            }
        }
        out
    }

    /// Inverse Demazure-Lusztig operator: `T^{-1} = T - t^(1/2) + t^(-1/2)`.
    pub fn apply_t_inv(&self, j: usize, f: &LPoly) -> LPoly {
        let thd = t_half_diff(self.node_class[j]);
        self.apply_t(j, f).sub(&f.scale(&thd))
    }

    /// `T_w` along a reduced word (`word[0]` acts first), then `pi`.
    pub fn apply_t_word(&self, pi_idx: usize, word: &[usize], f: &LPoly) -> LPoly {
        let mut g = f.clone();
        for &j in word {
            g = self.apply_t(j, &g);
        }
        if pi_idx != 0 {
            g = self.apply_pi(pi_idx, &g);
        }
        g
    }

    /// `T_w^{-1}` for the same word.
    pub fn apply_t_word_inv(&self, pi_idx: usize, word: &[usize], f: &LPoly) -> LPoly {
        let mut g = if pi_idx != 0 {
            self.apply_group(&self.weyl.pi[pi_idx].elem.inverse(), f)
        } else {
            f.clone()
        };
        for &j in word.iter().rev() {
            g = self.apply_t_inv(j, &g);
        }
        g
    }

    /// `T_w` for a finite Weyl element.
    pub fn apply_t_finite(&self, w: &crate::weyl::WElem, f: &LPoly) -> LPoly {
        let (pi_idx, word) = self
            .weyl
            .reduced_word(&ExtElem::finite(w.clone(), self.rank()));
        debug_assert_eq!(pi_idx, 0);
        self.apply_t_word(0, &word, f)
    }

    /// `Y_i^{+-1}` for a basis coweight.
    fn apply_y_basis(&self, i: usize, inverse: bool, f: &LPoly) -> LPoly {
        let (pi_idx, word) = &self.y_words[i];
        if inverse {
            self.apply_t_word_inv(*pi_idx, word, f)
        } else {
            self.apply_t_word(*pi_idx, word, f)
        }
    }

    /// `Y_b = prod Y_i^{k_i}` via T-words.
    pub fn apply_y(&self, b: &Weight, f: &LPoly) -> LPoly {
        let mut g = f.clone();
        for i in 0..self.rank() {
            let k = b.0[i];
            for _ in 0..k.unsigned_abs() {
                g = self.apply_y_basis(i, k < 0, &g);
            }
        }
        g
    }

    /// `Y_b` through the product of `G`-operators along a reduced word of the
    /// translation. Must agree with [`Self::apply_y`].
    pub fn apply_y_via_g(&self, b: &Weight, f: &LPoly) -> LPoly {
        let e = ExtElem::translation(self.rs(), b);
        let (pi_idx, word) = self.weyl.reduced_word(&e);
        // Affine coroots of the scan: a~^i = s_{j_1}..s_{j_{i-1}}(alpha_{j_i}^vee).
        let mut coroots: Vec<(usize, i64)> = Vec::with_capacity(word.len());
        let mut prefix = ExtElem::identity(self.rs());
        for &j in &word {
            let (root0, k0) = if j == 0 {
                (self.rs().roots[self.rs().theta].neg, 1i64)
            } else {
                (j - 1, 0i64)
            };
            // [alpha^vee, k] transforms as [w(alpha)^vee, k - (alpha^vee, t)].
            let img_root = prefix.w.act_root(root0);
            let k = k0 - self.rs().pair_w_coroot(&prefix.t, root0);
            coroots.push((img_root, k));
            prefix = prefix.mul(&self.weyl.s_affine[j]);
        }
        let mut g = f.clone();
        for &(root, k) in &coroots {
            g = self.apply_g(root, k, &g);
        }
        // Finally the translation part of b = pi_r s_{j_l} ... s_{j_1}: the
        // operator of the full translation element itself.
        let _ = pi_idx;
        g = self.apply_group(&e, &g);
        g
    }

    /// One factor `G^•` at the affine coroot `[alpha^vee, k]`; for negative
    /// `alpha` this is `G_{-a~}` with inverted `t`.
    fn apply_g(&self, root: usize, k: i64, f: &LPoly) -> LPoly {
        let rs = self.rs();
        let (root, k, star) = if rs.roots[root].positive {
            (root, k, false)
        } else {
            (rs.roots[root].neg, -k, true)
        };
        let class = rs.roots[root].class;
        let th = t_half(class, !star);
        let thd = if star {
            t_half_diff(class).neg()
        } else {
            t_half_diff(class)
        };
        let covee = rs.coroot_weight(root);
        let zq = rat_int(k);
        let mut out = LPoly::zero();
        for (c, coef) in f.terms() {
            let d = rs.pair_w_root(c, root);
            out.insert_add(c.clone(), coef.mul(&th));
            if d > 0 {
                let neg = coef.mul(&thd).neg();
                for i in 0..d {
                    let w = c.sub(&covee.scale(i));
                    let q = q_pow(rs, &(&zq * rat_int(-i))).expect("integral");
                    out.insert_add(w, neg.mul(&q));
                }
            } else if d < 0 {
                let pos = coef.mul(&thd);
                for i in 1..=(-d) {
                    let w = c.add(&covee.scale(i));
                    let q = q_pow(rs, &(&zq * rat_int(i))).expect("integral");
                    out.insert_add(w, pos.mul(&q));
                }
            }
        }
        out
    }

    /// Intertwiner at a finite node `i` (1-based affine node `i`), acting on a
    /// `Y`-eigenvector whose spectral point is `pt`. Returns the image; the
    /// image is an eigenvector for the reflected point.
    pub fn apply_intertwiner(
        &self,
        i: usize,
        eps: &SignSet,
        f: &LPoly,
        pt: &SpectralPoint,
    ) -> Result<LPoly> {
        assert!((1..=self.rank()).contains(&i));
        let class = self.node_class[i];
        let a_i = &self.node_z[i].0;
        let xa = pt.eval_monomial(self.rs(), a_i)?;
        if xa.is_one() {
            return Err(Error::WallSingularity(format!(
                "X_(a_{i}) takes value 1 at the spectral point"
            )));
        }
        // (Y_{a_i}^{-1} - 1)^{-1} acts as (x_{a_i}(pt) - 1)^{-1}.
        let s = xa.sub(&C::one()).inv();
        let thd = t_half_diff(class);
        let sgn = eps.sign(class);
        let phi = {
            let lead = if sgn == 1 {
                t_half(class, true)
            } else {
                t_half(class, false).neg()
            };
            lead.add(&thd.mul(&s))
        };
        if phi.is_zero() {
            return Err(Error::WallSingularity(format!(
                "phi_{i} vanishes at the spectral point"
            )));
        }
        let num = self.apply_t(i, f).add(&f.scale(&thd.mul(&s)));
        Ok(num.scale(&phi.inv()))
    }

    /// The `epsilon,t`-symmetrizer applied to `f`.
    pub fn symmetrize(&self, eps: &SignSet, f: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for w in self.weyl.all_w() {
            let l_nu = self.weyl.length_nu_finite(w);
            let mut coef = C::one();
            for (class, &l) in l_nu.iter().enumerate() {
                let sgn = eps.sign(class);
                if sgn == -1 && l % 2 == 1 {
                    coef = coef.neg();
                }
                coef = coef.mul(&t_half(class, sgn == 1).pow(l as i64));
            }
            out = out.add(&self.apply_t_finite(w, f).scale(&coef));
        }
        out
    }

    /// Project onto the span of the orbit monomials of `b_-` (the quotient of
    /// the cone module by its strictly-higher part).
    pub fn project_orbit(&self, bm: &Weight, f: &LPoly) -> LPoly {
        let orbit = self.weyl.orbit(bm);
        let mut out = LPoly::zero();
        for (c, coef) in f.terms() {
            if orbit.contains(c) {
                out.insert_add(c.clone(), coef.clone());
            }
        }
        out
    }
}

// ---- Relation checking harness ----

#[derive(Clone, Debug)]
pub struct RelationResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub family: String,
    pub seed: u64,
    pub samples: usize,
    pub results: Vec<RelationResult>,
}

impl RelationReport {
    pub fn all_ok(&self) -> bool {
        self.results.iter().all(|r| r.ok)
    }
}

/// A small random Laurent polynomial with sparse support and monomial
/// coefficients, for seeded identity testing.
pub fn random_poly(alg: &Algebra, rng: &mut ChaCha8Rng) -> LPoly {
    let n = alg.rank();
    let nterms = rng.gen_range(1..=3);
    let mut f = LPoly::zero();
    for _ in 0..nterms {
        let w = Weight(
            (0..n)
                .map(|_| rng.gen_range(-2..=2i64))
                .collect::<smallvec::SmallVec<[i64; 8]>>(),
        );
        let cst: i64 = *[1, -1, 2, -2, 3].iter().nth(rng.gen_range(0..5)).unwrap();
        let ve: i64 = rng.gen_range(-2..=2i64) * 2 * 1; // even powers keep q-integrality irrelevant
        let ue: i64 = rng.gen_range(-2..=2);
        let mut exps = [0i64; crate::mpoly::NVARS];
        exps[crate::mpoly::VAR_V] = ve;
        exps[crate::coeffs::u_slot(0)] = ue;
        let c = C::monomial(rat_int(cst), exps);
        f.insert_add(w, c);
    }
    if f.is_zero() {
        LPoly::one(n)
    } else {
        f
    }
}

fn braid_apply(alg: &Algebra, first: usize, second: usize, len: usize, f: &LPoly) -> LPoly {
    // T_first T_second T_first ... (len factors), rightmost acts first.
    let mut seq = Vec::with_capacity(len);
    for i in 0..len {
        seq.push(if i % 2 == 0 { first } else { second });
    }
    let mut g = f.clone();
    for &j in seq.iter().rev() {
        g = alg.apply_t(j, &g);
    }
    g
}

/// `m_ij` for two affine nodes from the Cartan-type product (2,3,4,6; `None`
/// encodes no braid relation, the infinite bond of the affine A1 diagram).
fn braid_order(alg: &Algebra, i: usize, j: usize) -> Option<usize> {
    let rs = alg.rs();
    let root_of = |k: usize| -> usize {
        if k == 0 {
            rs.roots[rs.theta].neg
        } else {
            k - 1
        }
    };
    let (ri, rj) = (root_of(i), root_of(j));
    let prod = rs.cartan_pair(ri, rj) * rs.cartan_pair(rj, ri);
    match prod {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

/// Run the defining-relation battery on seeded random polynomials.
pub fn relation_suite(
    alg: &Algebra,
    seed: u64,
    samples: usize,
    mode: crate::par::Mode,
) -> RelationReport {
    let n = alg.rank();
    let rs = alg.rs();
    let mut checks: Vec<(String, Box<dyn Fn(&LPoly) -> bool + Sync + Send + '_>)> = Vec::new();

    // (o) quadratic relations
    for j in 0..=n {
        let class = alg.node_class[j];
        checks.push((
            format!("(o) quadratic T_{j}"),
            Box::new(move |f: &LPoly| {
                // (T - t^(1/2))(T + t^(-1/2)) f = 0
                let tf = alg.apply_t(j, f);
                let g = tf.add(&f.scale(&t_half(class, false)));
                let tg = alg.apply_t(j, &g);
                tg.sub(&g.scale(&t_half(class, true))).is_zero()
            }),
        ));
    }
    // (i) braid relations
    for i in 0..=n {
        for j in (i + 1)..=n {
            let Some(mij) = braid_order(alg, i, j) else {
                continue;
            };
            checks.push((
                format!("(i) braid T_{i} T_{j} (m={mij})"),
                Box::new(move |f: &LPoly| {
                    braid_apply(alg, i, j, mij, f) == braid_apply(alg, j, i, mij, f)
                }),
            ));
        }
    }
    // (ii) pi conjugation
    for (pidx, p) in alg.weyl.pi.iter().enumerate().skip(1) {
        for i in 0..=n {
            let j = p.node_image[i];
            checks.push((
                format!("(ii) pi_{} T_{i} pi^-1 = T_{j}", p.r + 1),
                Box::new(move |f: &LPoly| {
                    let inv = alg.apply_group(&alg.weyl.pi[pidx].elem.inverse(), f);
                    let lhs = alg.apply_pi(pidx, &alg.apply_t(i, &inv));
                    lhs == alg.apply_t(j, f)
                }),
            ));
        }
    }
    // (iii) T_i X_{b_i} T_i = X_{b_i} X_{a_i}^{-1}, using b = b_i with (b, alpha_i) = 1
    for i in 1..=n {
        let b = Weight::basis(n, i - 1);
        let ai = Weight(rs.acoords[i - 1].iter().copied().collect());
        checks.push((
            format!("(iii) T_{i} X T_{i} cross relation"),
            Box::new(move |f: &LPoly| {
                let lhs = alg.apply_t(i, &alg.apply_t(i, f).mul_monomial(&b, &C::one()));
                let rhs = f.mul_monomial(&b.sub(&ai), &C::one());
                lhs == rhs
            }),
        ));
    }
    // (iv) T_0 X_b T_0 = X_b X_theta q^{-1} for (b, theta) = -1
    if let Some(b) = find_weight_with_theta_pairing(rs, -1) {
        let theta_w = rs.coroot_weight(rs.theta);
        checks.push((
            "(iv) T_0 X T_0 cross relation".to_string(),
            Box::new(move |f: &LPoly| {
                let lhs = alg.apply_t(0, &alg.apply_t(0, f).mul_monomial(&b, &C::one()));
                let q = q_pow(rs, &rat_int(-1)).unwrap();
                let rhs = f.mul_monomial(&b.add(&theta_w), &q);
                lhs == rhs
            }),
        ));
    }
    // (v) commuting relations at orthogonal weights
    for i in 0..=n {
        if let Some(b) = find_weight_orthogonal(alg, i) {
            checks.push((
                format!("(v) T_{i} commutes with orthogonal X"),
                Box::new(move |f: &LPoly| {
                    let lhs = alg.apply_t(i, &f.mul_monomial(&b, &C::one()));
                    let rhs = alg.apply_t(i, f).mul_monomial(&b, &C::one());
                    lhs == rhs
                }),
            ));
        }
    }
    // (vi) pi_r X_b pi_r^{-1} = X_{omega_r^{-1}(b)} q^{(b_{r*}, b)}
    for (pidx, p) in alg.weyl.pi.iter().enumerate().skip(1) {
        let b = Weight::basis(n, p.r);
        let img = p.omega.inverse().act_weight(&b);
        let qe = rs.pair_ww(&p.b_rstar, &b);
        checks.push((
            format!("(vi) pi_{} X relation", p.r + 1),
            Box::new(move |f: &LPoly| {
                let inv = alg.apply_group(&alg.weyl.pi[pidx].elem.inverse(), f);
                let lhs = alg.apply_pi(pidx, &inv.mul_monomial(&b, &C::one()));
                let rhs = f.mul_monomial(&img, &q_pow(rs, &qe).unwrap());
                lhs == rhs
            }),
        ));
    }
    // T_w independence of the reduced word: replay two different words.
    if let Some((e, w1, w2)) = two_reduced_words(alg) {
        let _ = &e;
        checks.push((
            "T_w word independence".to_string(),
            Box::new(move |f: &LPoly| {
                alg.apply_t_word(w1.0, &w1.1, f) == alg.apply_t_word(w2.0, &w2.1, f)
            }),
        ));
    }
    // Y commutativity and additivity.
    for i in 0..n {
        for j in (i + 1)..n {
            let bi = Weight::basis(n, i);
            let bj = Weight::basis(n, j);
            checks.push((
                format!("Y_{} Y_{} commute", i + 1, j + 1),
                Box::new(move |f: &LPoly| {
                    alg.apply_y(&bi, &alg.apply_y(&bj, f))
                        == alg.apply_y(&bj, &alg.apply_y(&bi, f))
                }),
            ));
        }
    }
    checks.push((
        "Y additivity on mixed signs".to_string(),
        Box::new(move |f: &LPoly| {
            // Y_{b} Y_{c} = Y_{b+c} for b = b_1, c = -b_1 - (last basis weight)
            let b = Weight::basis(n, 0);
            let mut c = b.neg();
            c.0[n - 1] -= 1;
            let lhs = alg.apply_y(&b, &alg.apply_y(&c, f));
            let rhs = alg.apply_y(&b.add(&c), f);
            lhs == rhs
        }),
    ));
    // phi(T_0): Y_theta^{-1} T_0 X_theta^{-1} = T_{s_theta}^{-1} X_theta^{-1}
    let theta_w = rs.coroot_weight(rs.theta);
    let s_theta = crate::weyl::WElem::reflection(rs, rs.theta);
    {
        let theta_w = theta_w.clone();
        let s_theta = s_theta.clone();
        checks.push((
            "phi(T_0) identity".to_string(),
            Box::new(move |f: &LPoly| {
                let xm = f.mul_monomial(&theta_w.neg(), &C::one());
                let lhs = alg.apply_y(&theta_w.neg(), &alg.apply_t(0, &xm));
                let (pi_idx, word) = alg
                    .weyl
                    .reduced_word(&ExtElem::finite(s_theta.clone(), n));
                let rhs = alg.apply_t_word_inv(pi_idx, &word, &xm);
                lhs == rhs
            }),
        ));
    }
    // eps(T_0): T_0^{-1} Y_theta = T_{s_theta}
    {
        checks.push((
            "eps(T_0) identity".to_string(),
            Box::new(move |f: &LPoly| {
                let lhs = alg.apply_t_inv(0, &alg.apply_y(&theta_w, f));
                let rhs = alg.apply_t_finite(&s_theta, f);
                lhs == rhs
            }),
        ));
    }

    // Sample polynomials up front so all checks see the same battery.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<LPoly> = (0..samples).map(|_| random_poly(alg, &mut rng)).collect();

    let results = crate::par::run_batch(mode, checks, |(name, check)| {
        let ok = polys.iter().all(|f| check(f));
        RelationResult { name, ok, detail: if ok { "ok".into() } else { "failed".into() } }
    });

    RelationReport {
        family: format!("{}{}", rs.family, rs.rank),
        seed,
        samples,
        results,
    }
}

fn find_weight_with_theta_pairing(rs: &RootSystem, target: i64) -> Option<Weight> {
    let n = rs.rank;
    let box_iter = weight_box(n, 2);
    box_iter
        .into_iter()
        .find(|b| rs.pair_w_root(b, rs.theta) == target)
}

fn find_weight_orthogonal(alg: &Algebra, node: usize) -> Option<Weight> {
    let n = alg.rank();
    weight_box(n, 2)
        .into_iter()
        .find(|b| !b.is_zero() && alg.node_pairing(node, b) == 0)
}

pub fn weight_box(n: usize, radius: i64) -> Vec<Weight> {
    let mut out = vec![Weight::zero(n)];
    for i in 0..n {
        let mut next = Vec::new();
        for w in out {
            for k in -radius..=radius {
                let mut v = w.clone();
                v.0[i] = k;
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn two_reduced_words(alg: &Algebra) -> Option<(ExtElem, (usize, Vec<usize>), (usize, Vec<usize>))> {
    // Find an element with at least two descents and strip them in different
    // orders; both must replay to the same element.
    let n = alg.rank();
    let b = Weight(
        (0..n)
            .map(|i| if i == 0 { 2 } else { 1 })
            .collect::<smallvec::SmallVec<[i64; 8]>>(),
    );
    let e = ExtElem::translation(alg.rs(), &b);
    let (p1, w1) = alg.weyl.reduced_word(&e);
    // Alternative greedy order: highest node first.
    let mut cur = e.clone();
    let mut word = Vec::new();
    'outer: loop {
        for j in (0..=n).rev() {
            if alg.weyl.is_descent(&cur, j) {
                cur = cur.mul(&alg.weyl.s_affine[j]);
                word.push(j);
                continue 'outer;
            }
        }
        break;
    }
    let p2 = alg.weyl.pi.iter().position(|p| p.elem == cur)?;
    if word == w1 {
        return None;
    }
    debug_assert_eq!(alg.weyl.from_word(p2, &word), e);
    Some((e, (p1, w1), (p2, word)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{q_pow, t_half};
    use crate::rootsys::Family;
    use crate::scalar::rat;

    fn alg(f: Family, n: usize) -> Algebra {
        Algebra::new(Weyl::new(RootSystem::new(f, n).unwrap()))
    }

    fn wt(k: &[i64]) -> Weight {
        Weight::from_slice(k)
    }

    fn x(k: &[i64]) -> LPoly {
        LPoly::x(&wt(k))
    }

    #[test]
    fn demazure_rank1_values() {
        let a = alg(Family::A, 1);
        // T_1(1) = t^(1/2)
        assert_eq!(a.apply_t(1, &LPoly::one(1)), LPoly::one(1).scale(&t_half(0, true)));
        // T_1(x) = t^(-1/2) x^{-1}
        assert_eq!(a.apply_t(1, &x(&[1])), x(&[-1]).scale(&t_half(0, false)));
        // T_1(x^{-1}) = t^(1/2) x + (t^(1/2)-t^(-1/2)) x^{-1}
        let expect = x(&[1])
            .scale(&t_half(0, true))
            .add(&x(&[-1]).scale(&t_half_diff(0)));
        assert_eq!(a.apply_t(1, &x(&[-1])), expect);
        // T^{-1} really inverts
        let f = x(&[1]).add(&x(&[-2]).scale(&C::from_i64(3)));
        assert_eq!(a.apply_t_inv(1, &a.apply_t(1, &f)), f);
    }

    #[test]
    fn s0_action_formula() {
        // s_0(X_i) = X_i X_theta^{-(b_i,theta)} q^{(b_i,theta)}
        for (fam, n) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
            let a = alg(fam, n);
            let rs = a.rs();
            let theta_w = rs.coroot_weight(rs.theta);
            for i in 0..n {
                let bi = Weight::basis(n, i);
                let p = rs.pair_w_root(&bi, rs.theta);
                let lhs = a.apply_group(&a.weyl.s_affine[0], &LPoly::x(&bi));
                let rhs = LPoly::monomial(
                    bi.sub(&theta_w.scale(p)),
                    q_pow(rs, &rat_int(p)).unwrap(),
                );
                assert_eq!(lhs, rhs, "{fam}{n} node {i}");
            }
        }
    }

    #[test]
    fn pi_action_formula() {
        // pi_r(x_b) = x_{omega_r^{-1}(b)} q^{(b_{r*}, b)} on a weight box.
        for (fam, n) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
            let a = alg(fam, n);
            let rs = a.rs();
            for (pidx, p) in a.weyl.pi.iter().enumerate().skip(1) {
                for b in weight_box(n, 2) {
                    let lhs = a.apply_pi(pidx, &LPoly::x(&b));
                    let qe = rs.pair_ww(&p.b_rstar, &b);
                    let rhs = LPoly::monomial(
                        p.omega.inverse().act_weight(&b),
                        q_pow(rs, &qe).unwrap(),
                    );
                    assert_eq!(lhs, rhs, "{fam}{n} r={} b={b:?}", p.r + 1);
                }
            }
        }
    }

    #[test]
    fn y_rank1_values() {
        let a = alg(Family::A, 1);
        // Y(1) = t^(1/2); Y(x) = q^(-1/2) t^(-1/2) x
        assert_eq!(a.apply_y(&wt(&[1]), &LPoly::one(1)), LPoly::one(1).scale(&t_half(0, true)));
        let ev = q_pow(a.rs(), &rat(-1, 2)).unwrap().mul(&t_half(0, false));
        assert_eq!(a.apply_y(&wt(&[1]), &x(&[1])), x(&[1]).scale(&ev));
        // Y^{-1} Y = id on a random-ish polynomial
        let f = x(&[2]).add(&x(&[-1]).scale(&C::from_i64(-5)));
        assert_eq!(a.apply_y(&wt(&[-1]), &a.apply_y(&wt(&[1]), &f)), f);
    }

    #[test]
    fn vacuum_eigenvalue() {
        // Y_b(1) = prod_nu t_nu^{(b, rho_nu)} for all small b, through both
        // constructions of Y.
        for (fam, n) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
            let a = alg(fam, n);
            let rs = a.rs();
            for b in weight_box(n, 2) {
                let mut expect = C::one();
                for class in 0..rs.n_classes() {
                    let e = rs.pair_rho_w(class, &b);
                    expect = expect.mul(&crate::coeffs::t_pow(class, &e).unwrap());
                }
                let one = LPoly::one(n);
                assert_eq!(a.apply_y(&b, &one), one.scale(&expect), "{fam}{n} b={b:?} via T");
                assert_eq!(
                    a.apply_y_via_g(&b, &one),
                    one.scale(&expect),
                    "{fam}{n} b={b:?} via G"
                );
            }
        }
    }

    #[test]
    fn g_product_matches_t_word() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (fam, n) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
            let a = alg(fam, n);
            for b in weight_box(n, 1) {
                for _ in 0..3 {
                    let f = random_poly(&a, &mut rng);
                    assert_eq!(
                        a.apply_y(&b, &f),
                        a.apply_y_via_g(&b, &f),
                        "{fam}{n} b={b:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn triangularity_three_cases() {
        // T_j(x_b) mod the strictly-higher cone matches the three-case law.
        for (fam, n) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
            let a = alg(fam, n);
            let rs = a.rs();
            for b in weight_box(n, 2) {
                let e = ExtElem::translation(rs, &b);
                if a.weyl.length(&e) > 4 {
                    continue;
                }
                let bm = a.weyl.orbit_extremes(&b).0;
                for j in 0..=n {
                    let class = a.node_class[j];
                    let tf = a.apply_t(j, &LPoly::x(&b));
                    let projected = a.project_orbit(&bm, &tf);
                    let d = a.node_pairing(j, &b);
                    // s_j(x_b) within the orbit projection
                    let sjb = a.project_orbit(
                        &bm,
                        &a.apply_group(&a.weyl.s_affine[j], &LPoly::x(&b)),
                    );
                    let expect = if d < 0 {
                        sjb.scale(&t_half(class, true))
                            .add(&LPoly::x(&b).scale(&t_half_diff(class)))
                    } else if d > 0 {
                        sjb.scale(&t_half(class, false))
                    } else {
                        LPoly::x(&b).scale(&t_half(class, true))
                    };
                    assert_eq!(projected, a.project_orbit(&bm, &expect), "{fam}{n} b={b:?} j={j}");
                }
            }
        }
    }

    #[test]
    fn y_preserves_cones() {
        // Y_a(x_b) stays inside the cone basis of b.
        for (fam, n) in [(Family::A, 1), (Family::A, 2)] {
            let a = alg(fam, n);
            for b in weight_box(n, 2) {
                let sigma = a.weyl.sigma(&b);
                for i in 0..n {
                    let img = a.apply_y(&Weight::basis(n, i), &LPoly::x(&b));
                    for (c, _) in img.terms() {
                        assert!(
                            sigma.contains(c),
                            "{fam}{n}: Y_{} left the cone of {b:?} at {c:?}",
                            i + 1
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn induced_module_eigenvalues() {
        // In the quotient module over the orbit of b_-, x_+ = x_{b_+} is a
        // Y-eigenvector with eigenvalue q^{(a,b_+)} prod t_nu^{(omega_{b_+}(a), rho_nu)}.
        for (fam, n) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
            let a = alg(fam, n);
            let rs = a.rs();
            for bp in [Weight::basis(n, 0), Weight::basis(n, n - 1)] {
                let (bm, bp2, _, _) = a.weyl.orbit_extremes(&bp);
                assert_eq!(bp, bp2);
                let omega_bp = a.weyl.decompose_pi_omega(&bp).1;
                for i in 0..n {
                    // Eigenvalue x_{-a}(#b_+) = q^{-(a,b_+)} prod t^{(omega(a),rho)}.
                    let av = Weight::basis(n, i);
                    let img = a.project_orbit(&bm, &a.apply_y(&av, &LPoly::x(&bp)));
                    let mut ev = q_pow(rs, &(-rs.pair_ww(&av, &bp))).unwrap();
                    let wa = omega_bp.act_weight(&av);
                    for class in 0..rs.n_classes() {
                        let e = rs.pair_rho_w(class, &wa);
                        ev = ev.mul(&crate::coeffs::t_pow(class, &e).unwrap());
                    }
                    assert_eq!(img, LPoly::x(&bp).scale(&ev), "{fam}{n} i={i} b+={bp:?}");
                }
                // T_j(x_+) = t^(1/2) x_+ for stabilizing nodes
                for j in 1..=n {
                    if bp.0[j - 1] == 0 {
                        let img = a.project_orbit(&bm, &a.apply_t(j, &LPoly::x(&bp)));
                        assert_eq!(
                            img,
                            LPoly::x(&bp).scale(&t_half(a.node_class[j], true)),
                            "{fam}{n} j={j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn symmetrizer_eigenproperty() {
        // T_j P_+(f) = t^(1/2) P_+(f) for finite nodes.
        for (fam, n) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
            let a = alg(fam, n);
            let eps = SignSet::plus(a.rs().n_classes());
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..3 {
                let f = random_poly(&a, &mut rng);
                let p = a.symmetrize(&eps, &f);
                for j in 1..=n {
                    assert_eq!(
                        a.apply_t(j, &p),
                        p.scale(&t_half(a.node_class[j], true)),
                        "{fam}{n} node {j}"
                    );
                }
            }
        }
    }

    #[test]
    fn symmetrizer_rank1_values() {
        let a = alg(Family::A, 1);
        // P_+(1) = (1 + t) t^{-1/2}: terms t^{l/2} T_w(1) = t^0 and t^{1/2}*t^{1/2}
        let p = a.symmetrize(&SignSet::plus(1), &LPoly::one(1));
        let expect = C::one().add(&t_half(0, true).pow(2));
        assert_eq!(p, LPoly::one(1).scale(&expect));
        // minus-symmetrization of x: s_1-antisymmetric up to the t-twist
        let pm = a.symmetrize(&SignSet::minus(1), &x(&[1]));
        // T_1 eigenvalue must be -t^{-1/2}
        assert_eq!(a.apply_t(1, &pm), pm.scale(&t_half(0, false).neg()));
    }

    #[test]
    fn relation_suite_a1() {
        let a = alg(Family::A, 1);
        let rep = relation_suite(&a, 42, 12, crate::par::Mode::Sequential);
        for r in &rep.results {
            assert!(r.ok, "failed: {}", r.name);
        }
    }

    #[test]
    fn relation_suite_b2_smoke() {
        let a = alg(Family::B, 2);
        let rep = relation_suite(&a, 5, 4, crate::par::Mode::Sequential);
        for r in &rep.results {
            assert!(r.ok, "failed: {}", r.name);
        }
    }

    #[test]
    fn intertwiner_moves_eigenvector_a1() {
        let a = alg(Family::A, 1);
        // e_{b_1} = x with spectral point #b_1; Phi_1 maps it into the
        // eigenvector for s_1(b_1) = -b_1.
        let pt = SpectralPoint::sharp(&a.weyl, &wt(&[1]));
        let eps = SignSet::plus(1);
        let img = a.apply_intertwiner(1, &eps, &x(&[1]), &pt).unwrap();
        // Must be a Y-eigenvector with the eigenvalue of #(-b_1):
        // Y(img) = x_{-b_1}(#(-b_1)) img, and x_{b_1}(#(-b_1)) = q^{-1/2} t^{-1/2}.
        let ptm = SpectralPoint::sharp(&a.weyl, &wt(&[-1]));
        let ev = ptm.eval_monomial(a.rs(), &wt(&[-1])).unwrap();
        assert_eq!(a.apply_y(&wt(&[1]), &img), img.scale(&ev));
        assert!(!img.is_zero());
    }
}
