//! Roots-of-unity specializations: the quotient lattice `B_N`, the fundamental
//! set `B(N)`, the finite module `V_N` of functions on it (generic `t` over a
//! cyclotomic field), and — at `t = q^k` — the reduced rank-one module with
//! the Gaussian and its projective `SL(2,Z)` matrices.
//!
//! `q_0` is a primitive root of unity with `q_0^{2m} = q`. When `N` is odd
//! and coprime to `|Pi|` the order is `N` itself and `K_N = N P cap B`;
//! otherwise the order is `2mN` and `K_N = N Q cap B`. Both descriptions are
//! verified against the radical computed by exact integer linear algebra.

use crate::coeffs::{specialize_cyclotomic, C};
use crate::cyclotomic::Cyc;
use crate::linalg::Matrix;
use crate::macdonald::Macdonald;
use crate::mpoly::NVARS;
use crate::ratfun::RatFun;
use crate::rootsys::Weight;
use crate::scalar::{rat_int, to_i64, Rat, Scalar};
use crate::weyl::{ExtElem, WElem};
use crate::{Error, Result};
use num::Integer;
use std::collections::HashMap;

/// Coefficient over the cyclotomic field: rational function in the `u`
/// variables with `Q(zeta)` constants.
pub type CC = RatFun<Cyc>;

fn cc_zeta(order: u32, e: i64) -> CC {
    CC::constant(Cyc::zeta_pow(order, e))
}

// ---- integer lattice utilities ----

/// Smith normal form `P = U D V` of a square integer matrix; returns
/// `(d, v_inv)` with the diagonal and the inverse of `V` (columns of `v_inv`
/// scaled by the kernel moduli give the kernel lattice).
fn smith_diagonal(p: &[Vec<i64>]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let n = p.len();
    let mut a: Vec<Vec<i128>> = p
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    // v accumulates the right transforms; v_inv its inverse.
    let mut v: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut v_inv = v.clone();

    fn swap_cols(m: &mut [Vec<i128>], i: usize, j: usize) {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }
    // col_j += c * col_i
    fn add_col(m: &mut [Vec<i128>], j: usize, i: usize, c: i128) {
        for row in m.iter_mut() {
            let t = row[i] * c;
            row[j] += t;
        }
    }
    fn add_row(m: &mut [Vec<i128>], j: usize, i: usize, c: i128) {
        for k in 0..m[0].len() {
            let t = m[i][k] * c;
            m[j][k] += t;
        }
    }

    let mut row_ops: Vec<(usize, usize, i128, bool)> = Vec::new(); // unused transforms on the left
    let _ = &mut row_ops;

    for t in 0..n {
        loop {
            // find pivot with minimal absolute value in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            // move pivot to (t, t)
            if bi != t {
                a.swap(bi, t);
            }
            if bj != t {
                swap_cols(&mut a, bj, t);
                swap_cols(&mut v, bj, t);
                // inverse: swap rows of v_inv
                v_inv.swap(bj, t);
            }
            let piv = a[t][t];
            let mut clean = true;
            for i in (t + 1)..n {
                if a[i][t] % piv != 0 {
                    clean = false;
                }
                let c = -(a[i][t] / piv);
                if c != 0 {
                    add_row(&mut a, i, t, c);
                }
            }
            for j in (t + 1)..n {
                let rem = a[t][j] % piv;
                let c = -(a[t][j] / piv);
                if c != 0 {
                    add_col(&mut a, j, t, c);
                    add_col(&mut v, j, t, c);
                    // inverse of col_j += c col_t is row_t -= c row_j
                    add_row(&mut v_inv, t, j, -c);
                }
                if rem != 0 {
                    clean = false;
                }
            }
            if clean {
                let done = ((t + 1)..n).all(|i| a[i][t] == 0) && ((t + 1)..n).all(|j| a[t][j] == 0);
                if done {
                    break;
                }
            }
        }
    }
    let d: Vec<i64> = (0..n).map(|i| i64::try_from(a[i][i].abs()).unwrap()).collect();
    let vi: Vec<Vec<i64>> = v_inv
        .iter()
        .map(|r| r.iter().map(|&x| i64::try_from(x).unwrap()).collect())
        .collect();
    (d, vi)
}

/// Column-style Hermite form of a full-rank integer lattice basis, lower
/// triangular with positive diagonal.
fn hermite_columns(basis: &[Weight]) -> Vec<Vec<i64>> {
    let n = basis[0].rank();
    let mut cols: Vec<Vec<i128>> = basis
        .iter()
        .map(|w| w.0.iter().map(|&x| x as i128).collect())
        .collect();
    for row in 0..n {
        loop {
            // pivot: nonzero entry of minimal |.| in this row among cols >= row
            let mut best: Option<usize> = None;
            for (j, col) in cols.iter().enumerate().skip(row) {
                if col[row] != 0 && best.map_or(true, |b| col[row].abs() < cols[b][row].abs()) {
                    best = Some(j);
                }
            }
            let Some(bj) = best else {
                panic!("lattice basis not full rank");
            };
            cols.swap(row, bj);
            let piv = cols[row][row];
            let mut finished = true;
            for j in (row + 1)..cols.len() {
                let c = cols[j][row] / piv;
                if c != 0 {
                    for i in 0..n {
                        let t = cols[row][i] * c;
                        cols[j][i] -= t;
                    }
                }
                if cols[j][row] != 0 {
                    finished = false;
                }
            }
            if finished {
                break;
            }
        }
        if cols[row][row] < 0 {
            for i in 0..n {
                cols[row][i] = -cols[row][i];
            }
        }
        // reduce earlier columns' entries in this row
        for j in 0..row {
            let piv = cols[row][row];
            let c = cols[j][row].div_euclid(piv);
            if c != 0 {
                for i in 0..n {
                    let t = cols[row][i] * c;
                    cols[j][i] -= t;
                }
            }
        }
    }
    cols.truncate(n);
    cols.iter()
        .map(|c| c.iter().map(|&x| i64::try_from(x).unwrap()).collect())
        .collect()
}

/// Cyclotomic context for one root system and one `N`.
pub struct UnityCtx {
    pub n_root: i64,
    /// Order of the root of unity `q_0` (`q = q_0^{2m}`).
    pub order: u32,
    pub coprime_mode: bool,
    /// Lattice basis of `K_N` (columns, Hermite form).
    pub k_basis: Vec<Vec<i64>>,
    pub bn_order: i64,
    /// Fundamental representatives, `b_fund[0] = 0`.
    pub b_fund: Vec<Weight>,
    /// Spectral pairs `#beta` for each representative.
    pub points: Vec<ExtElem>,
    /// `t = q^k` exponents when specialized; `None` keeps `t` symbolic.
    pub t_qk: Option<Vec<i64>>,
    point_index: HashMap<(Vec<i64>, Vec<i64>), usize>,
}

impl UnityCtx {
    pub fn q0(&self, e: i64) -> Cyc {
        Cyc::zeta_pow(self.order, e)
    }

    /// `q^e` for rational `e` with `2m e` integral.
    pub fn q_pow(&self, mac: &Macdonald, e: &Rat) -> Result<Cyc> {
        let ve = e * rat_int(2 * mac.alg.rs().m);
        if !ve.is_integer() {
            return Err(Error::NonIntegralExponent { var: "q0", num: 0, den: 0 });
        }
        Ok(self.q0(to_i64(&ve)))
    }

    /// Reduce a weight modulo `K_N` to the canonical box representative.
    pub fn reduce(&self, w: &Weight) -> Vec<i64> {
        let n = w.rank();
        let mut v: Vec<i64> = w.0.iter().copied().collect();
        for j in (0..n).rev() {
            let d = self.k_basis[j][j];
            let q = v[j].div_euclid(d);
            if q != 0 {
                for i in 0..n {
                    v[i] -= q * self.k_basis[j][i];
                }
            }
        }
        v
    }

    pub fn point_of(&self, e: &ExtElem) -> Option<usize> {
        let key = (welem_key(&e.w), self.reduce(&e.t));
        self.point_index.get(&key).copied()
    }

    /// Value of `x_a` at point `i`: `q^{(a,b)} prod t^{-(w(rho), a)}`.
    pub fn x_at(&self, mac: &Macdonald, a: &Weight, i: usize) -> Result<CC> {
        let rs = mac.alg.rs();
        let p = &self.points[i];
        let qe = rs.pair_ww(a, &p.t);
        let mut out = CC::constant(self.q_pow(mac, &qe)?);
        for class in 0..rs.n_classes() {
            let wrho = p.w.act_coords(&rs.rho[class]);
            let acoords: Vec<Rat> = a.0.iter().map(|&x| rat_int(x)).collect();
            let te = -rs.pair_qq(&wrho, &acoords);
            match &self.t_qk {
                None => {
                    let ue = &te * rat_int(2);
                    if !ue.is_integer() {
                        return Err(Error::NonIntegralExponent { var: "u", num: 0, den: 0 });
                    }
                    let mut exps = [0i64; NVARS];
                    exps[crate::coeffs::u_slot(class)] = to_i64(&ue);
                    out = out.mul(&CC::monomial(Cyc::one(), exps));
                }
                Some(k) => {
                    // t_nu = q^{2 k_nu / nu}
                    let qe = te * rat_int(2 * k[class]) / rs.nu(class);
                    out = out.mul(&CC::constant(self.q_pow(mac, &qe)?));
                }
            }
        }
        Ok(out)
    }

    /// `t_class^{1/2}` in the context field.
    pub fn t_half(&self, mac: &Macdonald, class: usize, positive: bool) -> CC {
        match &self.t_qk {
            None => {
                let mut exps = [0i64; NVARS];
                exps[crate::coeffs::u_slot(class)] = if positive { 1 } else { -1 };
                CC::monomial(Cyc::one(), exps)
            }
            Some(k) => {
                let e = rat_int(2 * mac.alg.rs().m * k[class]) / mac.alg.rs().nu(class);
                let e = to_i64(&e);
                CC::constant(self.q0(if positive { e } else { -e }))
            }
        }
    }

    /// Specialize a generic coefficient into the context field.
    pub fn specialize(&self, mac: &Macdonald, c: &C) -> Result<CC> {
        let c = match &self.t_qk {
            None => c.clone(),
            Some(k) => crate::coeffs::specialize_coeff_t_qk(mac.alg.rs(), c, k),
        };
        specialize_cyclotomic(&c, self.order, 1)
    }
}

fn welem_key(w: &WElem) -> Vec<i64> {
    // The acting matrix determines the element.
    let n = {
        // recover rank from the matrix size
        let mut k = 1;
        while k * k < welem_mat(w).len() {
            k += 1;
        }
        k
    };
    let _ = n;
    welem_mat(w).to_vec()
}

fn welem_mat(w: &WElem) -> &[i64] {
    // WElem exposes action through act_weight; for keying we use the images
    // of the basis coweights.
    w.mat_slice()
}

/// Build the cyclotomic context (radical, fundamental set, admissibility).
pub fn build_context(mac: &Macdonald, n_root: i64, t_qk: Option<Vec<i64>>) -> Result<UnityCtx> {
    let rs = mac.alg.rs();
    let weyl = &mac.alg.weyl;
    let n = rs.rank;
    if n_root < 2 {
        return Err(Error::InadmissibleContext("N must be at least 2".into()));
    }
    let coprime_mode = n_root.gcd(&rs.pi_order) == 1 && n_root % 2 == 1;
    let order: i64 = if coprime_mode { n_root } else { 2 * rs.m * n_root };
    if !coprime_mode && n_root % 2 == 1 {
        // The Gaussian condition excludes B_n and C_{4l+2} at odd N unless the
        // root of unity can be taken of order N (handled by coprime mode).
        let bad = matches!(rs.family, crate::rootsys::Family::B)
            || (matches!(rs.family, crate::rootsys::Family::C) && (rs.rank % 4) == 2);
        if bad {
            return Err(Error::InadmissibleContext(format!(
                "odd N={n_root} is inadmissible for {}{}",
                rs.family, rs.rank
            )));
        }
    }
    let order = u32::try_from(order).expect("order fits u32");

    // K_N = { a : 2m (a, b_j) = 0 mod M for all j }, M = order.
    let mut p_mat = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = &rs.gram_b[i][j] * rat_int(2 * rs.m);
            if !v.is_integer() {
                return Err(Error::InadmissibleContext(
                    "pairing is not integral in the chosen root order".into(),
                ));
            }
            p_mat[j][i] = to_i64(&v); // row j: constraint against b_j
        }
    }
    let (d, v_inv) = smith_diagonal(&p_mat);
    let m_i64 = order as i64;
    let mut gens: Vec<Weight> = Vec::new();
    let mut bn_order: i64 = 1;
    for (i, &di) in d.iter().enumerate() {
        let step = m_i64 / di.gcd(&m_i64);
        bn_order *= step;
        // column i of v_inv scaled by step
        let col: Vec<i64> = (0..n).map(|r| v_inv[r][i] * step).collect();
        gens.push(Weight::from_slice(&col));
    }
    let k_basis = hermite_columns(&gens);

    // Verify the radical property on generators: q^{(kappa, b_j)} = 1.
    for col in &k_basis {
        for j in 0..n {
            let e = rs.pair_ww(&Weight::from_slice(col), &Weight::basis(n, j)) * rat_int(2 * rs.m);
            assert!(e.is_integer() && to_i64(&e).rem_euclid(m_i64) == 0, "radical generator check");
        }
    }

    let mut ctx = UnityCtx {
        n_root,
        order,
        coprime_mode,
        k_basis,
        bn_order,
        b_fund: Vec::new(),
        points: Vec::new(),
        t_qk,
        point_index: HashMap::new(),
    };

    // Enumerate B(N): growing shells, dedup by (b mod K_N, omega_b).
    let target = bn_order * weyl.all_w().len() as i64;
    let mut radius = 1i64;
    loop {
        let mut found: Vec<Weight> = Vec::new();
        let mut seen: HashMap<(Vec<i64>, Vec<i64>), usize> = HashMap::new();
        let mut shell: Vec<Weight> = crate::ops::weight_box(n, radius);
        shell.sort_by_key(|w| (w.0.iter().map(|&x| x.abs()).sum::<i64>(), w.clone()));
        for b in shell {
            let sharp = weyl.sharp(&b);
            let key = (welem_key(&sharp.w), ctx.reduce(&sharp.t));
            if !seen.contains_key(&key) {
                seen.insert(key, found.len());
                found.push(b);
            }
        }
        if found.len() as i64 == target {
            ctx.b_fund = found;
            break;
        }
        radius += 1;
        if radius > 4 * n_root {
            return Err(Error::WindowExhausted("B(N) enumeration".into()));
        }
    }
    assert!(ctx.b_fund[0].is_zero(), "beta^1 must be 0");
    for b in &ctx.b_fund {
        let sharp = weyl.sharp(b);
        let key = (welem_key(&sharp.w), ctx.reduce(&sharp.t));
        ctx.point_index.insert(key, ctx.points.len());
        ctx.points.push(sharp);
    }
    Ok(ctx)
}

/// Matrices of the generators on functions over `B(N)` in the delta basis.
pub struct FiniteModule {
    pub dim: usize,
    /// `T_j`, affine nodes `0..=n`.
    pub t_mats: Vec<Matrix<CC>>,
    /// `X_{b_i}` (diagonal).
    pub x_mats: Vec<Matrix<CC>>,
    pub y_mats: Vec<Matrix<CC>>,
    /// `pi` matrices aligned with `weyl.pi` (identity first).
    pub pi_mats: Vec<Matrix<CC>>,
    /// `Pi[i][j] = eps_{beta^i}(#beta^j)`.
    pub pi_matrix: Matrix<CC>,
}

/// Build the finite module: generator actions discretized over `B(N)`.
pub fn build_module(mac: &Macdonald, ctx: &UnityCtx) -> Result<FiniteModule> {
    let rs = mac.alg.rs();
    let weyl = &mac.alg.weyl;
    let n = rs.rank;
    let d = ctx.b_fund.len();

    let group_matrix = |e: &ExtElem| -> Result<Matrix<CC>> {
        let mut m = Matrix::zero(d, d);
        let einv = e.inverse();
        for i in 0..d {
            let target = einv.mul(&ctx.points[i]);
            let j = ctx
                .point_of(&target)
                .ok_or_else(|| Error::WindowExhausted("point set not closed".into()))?;
            m[(i, j)] = CC::one();
        }
        Ok(m)
    };

    // T_j matrices.
    let mut t_mats = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let class = if j == 0 { rs.roots[rs.theta].class } else { rs.simple_class[j - 1] };
        let th = ctx.t_half(mac, class, true);
        let thi = ctx.t_half(mac, class, false);
        let thd = th.sub(&thi);
        let sj = &weyl.s_affine[j];
        let mut m: Matrix<CC> = Matrix::zero(d, d);
        for i in 0..d {
            // X_{a_j}(p): for j = 0 this is q x_{-theta}(p).
            let xa = if j == 0 {
                let x = ctx.x_at(mac, &weyl.theta_covee.neg(), i)?;
                x.mul(&CC::constant(ctx.q_pow(mac, &rat_int(1))?))
            } else {
                ctx.x_at(mac, &Weight(rs.acoords[j - 1].iter().copied().collect()), i)?
            };
            let den = xa.sub(&CC::one());
            if den.is_zero() {
                return Err(Error::VanishingDenominator(format!(
                    "X_(a_{j}) = 1 at point {:?}",
                    ctx.b_fund[i]
                )));
            }
            let ca = th.mul(&xa).sub(&thi).div(&den);
            let cb = thd.div(&den).neg();
            let target = sj.inverse().mul(&ctx.points[i]);
            let jdx = ctx
                .point_of(&target)
                .ok_or_else(|| Error::WindowExhausted("reflection left the point set".into()))?;
            m[(i, jdx)] = m[(i, jdx)].add(&ca);
            m[(i, i)] = m[(i, i)].add(&cb);
        }
        t_mats.push(m);
    }

    // X matrices (diagonal).
    let mut x_mats = Vec::with_capacity(n);
    for i in 0..n {
        let b = Weight::basis(n, i);
        let mut m = Matrix::zero(d, d);
        for p in 0..d {
            m[(p, p)] = ctx.x_at(mac, &b, p)?;
        }
        x_mats.push(m);
    }

    // pi matrices.
    let mut pi_mats = Vec::with_capacity(weyl.pi.len());
    for p in &weyl.pi {
        pi_mats.push(group_matrix(&p.elem)?);
    }

    // Y_i along the reduced words.
    let mut y_mats = Vec::with_capacity(n);
    for i in 0..n {
        let (pidx, word) = weyl.reduced_word(&ExtElem::translation(rs, &Weight::basis(n, i)));
        let mut m = Matrix::identity(d);
        for &j in &word {
            m = t_mats[j].mul(&m);
        }
        m = pi_mats[pidx].mul(&m);
        y_mats.push(m);
    }

    // Pi matrix from the normalized polynomials.
    let mut pi_matrix = Matrix::zero(d, d);
    for (i, b) in ctx.b_fund.iter().enumerate() {
        let e = mac.compute_e(b)?;
        let eps = e.normalized();
        for j in 0..d {
            let mut v = CC::zero();
            for (c, coef) in eps.terms() {
                let xval = ctx.x_at(mac, c, j)?;
                v = v.add(&ctx.specialize(mac, coef)?.mul(&xval));
            }
            pi_matrix[(i, j)] = v;
        }
    }

    Ok(FiniteModule { dim: d, t_mats, x_mats, y_mats, pi_mats, pi_matrix })
}

impl FiniteModule {
    /// Matrix-level defining relations; returns failures by name.
    pub fn relation_failures(&self, mac: &Macdonald, ctx: &UnityCtx) -> Vec<String> {
        let rs = mac.alg.rs();
        let n = rs.rank;
        let d = self.dim;
        let id = Matrix::<CC>::identity(d);
        let mut bad = Vec::new();
        // (o)
        for j in 0..=n {
            let class = if j == 0 { rs.roots[rs.theta].class } else { rs.simple_class[j - 1] };
            let th = ctx.t_half(mac, class, true);
            let thi = ctx.t_half(mac, class, false);
            let t = &self.t_mats[j];
            let lhs = t.sub(&id.scale(&th)).mul(&t.add(&id.scale(&thi)));
            if lhs != Matrix::zero(d, d) {
                bad.push(format!("(o) T_{j}"));
            }
        }
        // Y commute
        for i in 0..n {
            for j in 0..i {
                if self.y_mats[i].mul(&self.y_mats[j]) != self.y_mats[j].mul(&self.y_mats[i]) {
                    bad.push(format!("[Y_{i}, Y_{j}]"));
                }
            }
        }
        // X commute (diagonal, trivially) and T-X cross relation (iii)
        for i in 1..=n {
            let b = Weight::basis(n, i - 1);
            let ai = Weight(rs.acoords[i - 1].iter().copied().collect());
            let xb = self.weight_matrix(mac, ctx, &b);
            let xbai = self.weight_matrix(mac, ctx, &b.sub(&ai));
            match (xb, xbai) {
                (Ok(xb), Ok(xbai)) => {
                    let lhs = self.t_mats[i].mul(&xb).mul(&self.t_mats[i]);
                    if lhs != xbai {
                        bad.push(format!("(iii) node {i}"));
                    }
                }
                _ => bad.push(format!("(iii) node {i} setup")),
            }
        }
        bad
    }

    /// Diagonal multiplication matrix of `x_b`.
    pub fn weight_matrix(&self, mac: &Macdonald, ctx: &UnityCtx, b: &Weight) -> Result<Matrix<CC>> {
        let d = self.dim;
        let mut m = Matrix::zero(d, d);
        for p in 0..d {
            m[(p, p)] = ctx.x_at(mac, b, p)?;
        }
        Ok(m)
    }

    /// Irreducibility witness: the span of the constant function under the
    /// generator matrices reaches the full dimension.
    pub fn irreducibility_witness(&self) -> bool {
        let d = self.dim;
        let mut span: Vec<Vec<CC>> = vec![vec![CC::one(); d]];
        let gens: Vec<&Matrix<CC>> = self
            .t_mats
            .iter()
            .chain(self.x_mats.iter())
            .chain(self.pi_mats.iter())
            .collect();
        loop {
            let mut mat = Matrix::from_rows(span.clone());
            let rank = mat.rref().len();
            if rank == d {
                return true;
            }
            let mut grew = false;
            let current = span.clone();
            for g in &gens {
                for v in &current {
                    // rows are function values; generators act on functions, so
                    // apply the transpose action v -> v * g^T is g.mul_vec? The
                    // matrices are (point, point); functions are row vectors.
                    let img = g.transpose().mul_vec(v);
                    let mut test = span.clone();
                    test.push(img.clone());
                    let r = Matrix::from_rows(test.clone()).rref().len();
                    if r > span.len().min(d) - (span.len() - Matrix::from_rows(span.clone()).rref().len()) {
                        // keep rows only when they enlarge the span
                    }
                    let old_rank = Matrix::from_rows(span.clone()).rref().len();
                    if r > old_rank {
                        span.push(img);
                        grew = true;
                    }
                }
            }
            if !grew {
                return false;
            }
        }
    }
}

// ---- the reduced rank-one module at t = q^k and the SL(2,Z) matrices ----

/// Reduced module of functions on the surviving spectral characters at
/// `t = q^k` (rank one).
pub struct TildeModule {
    pub n_root: i64,
    pub k: i64,
    /// Character exponents `e` with `x_{a_1}` value `q^e` (mod N).
    pub chars: Vec<i64>,
    /// Position of the character of the lattice point 0 (`e = -k`).
    pub zero_pos: usize,
    pub t1: Matrix<CC>,
    pub t0: Matrix<CC>,
    pub pi1: Matrix<CC>,
    pub x1: Matrix<CC>,
    pub y1: Matrix<CC>,
    /// Eigenbasis rows: `eps~_i` values, normalized at `zero_pos`.
    pub eps_rows: Vec<Vec<CC>>,
}

pub fn build_tilde_module(mac: &Macdonald, n_root: i64, k: i64) -> Result<TildeModule> {
    let rs = mac.alg.rs();
    if rs.rank != 1 {
        return Err(Error::Unsupported("the reduced module is rank-one only".into()));
    }
    if n_root % 2 == 0 || n_root.gcd(&rs.pi_order) != 1 {
        return Err(Error::InadmissibleContext("need odd N coprime to |Pi|".into()));
    }
    // krho: q^{k + i} != 1 for i in (-k, k], i.e. N > 2k.
    if n_root <= 2 * k {
        return Err(Error::InadmissibleContext(format!(
            "N = {n_root} violates the nonvanishing condition for k = {k}"
        )));
    }
    let order = u32::try_from(n_root).unwrap();
    let modn = |e: i64| -> i64 { e.rem_euclid(n_root) };
    // Closure from the character of 0 under pi (always) and s_1 (unless the
    // transition coefficient vanishes, which happens exactly at e = -k).
    let e0 = modn(-k);
    let mut chars = vec![e0];
    let mut stack = vec![e0];
    while let Some(e) = stack.pop() {
        let push = |x: i64, chars: &mut Vec<i64>, stack: &mut Vec<i64>| {
            let x = modn(x);
            if !chars.contains(&x) {
                chars.push(x);
                stack.push(x);
            }
        };
        push(1 - e, &mut chars, &mut stack);
        if e != e0 {
            push(-e, &mut chars, &mut stack);
        }
    }
    if chars.contains(&0) {
        return Err(Error::InadmissibleContext(
            "reduced point set hit the singular character 0".into(),
        ));
    }
    chars.sort_unstable();
    let zero_pos = chars.iter().position(|&e| e == e0).unwrap();
    let d = chars.len();
    let idx = |e: i64| -> Option<usize> { chars.iter().position(|&x| x == modn(e)) };

    let q = |e: i64| -> CC { cc_zeta(order, e) };
    // t^{1/2} = q^{k/2}; with odd N take the square root inside mu_N.
    let half = (n_root + 1) / 2;
    let th = q(k * half);
    let thi = q(-k * half);
    let thd = th.sub(&thi);

    // T_1: (T f)(e) = cA(e) f(-e) + cB(e) f(e).
    let mut t1: Matrix<CC> = Matrix::zero(d, d);
    for (i, &e) in chars.iter().enumerate() {
        let xa = q(e);
        let den = xa.sub(&CC::one());
        let ca = th.mul(&xa).sub(&thi).div(&den);
        let cb = thd.div(&den).neg();
        match idx(-e) {
            Some(j) => {
                t1[(i, j)] = t1[(i, j)].add(&ca);
            }
            None => {
                if !ca.is_zero() {
                    return Err(Error::RelationFailed(
                        "reduced module is not closed under T_1".into(),
                    ));
                }
            }
        }
        t1[(i, i)] = t1[(i, i)].add(&cb);
    }
    // pi_1: (pi f)(e) = f(1 - e).
    let mut pi1 = Matrix::zero(d, d);
    for (i, &e) in chars.iter().enumerate() {
        let j = idx(1 - e).ok_or_else(|| {
            Error::RelationFailed("reduced module is not closed under pi".into())
        })?;
        pi1[(i, j)] = CC::one();
    }
    // X_{b_1}: diagonal q^{e/2} = q0^{... }; q^{1/2} = q^{half}.
    let mut x1 = Matrix::zero(d, d);
    for (i, &e) in chars.iter().enumerate() {
        x1[(i, i)] = q(e * half);
    }
    let y1 = pi1.mul(&t1);
    let t0 = pi1.mul(&t1).mul(&pi1.clone());

    // Eigenbasis of Y_1 with eigenvalues q^{-e/2}, normalized at zero_pos.
    let mut eps_rows = Vec::with_capacity(d);
    for &e in &chars {
        let lambda = q(-e * half);
        let mut m = y1.clone();
        for i in 0..d {
            m[(i, i)] = m[(i, i)].sub(&lambda);
        }
        let ker = m.transpose().kernel();
        if ker.len() != 1 {
            return Err(Error::SingularSystem(format!(
                "Y eigenvalue multiplicity {} at character {e}",
                ker.len()
            )));
        }
        let v = &ker[0];
        if v[zero_pos].is_zero() {
            return Err(Error::SingularSystem("eigenfunction vanishes at 0".into()));
        }
        let inv = v[zero_pos].inv();
        eps_rows.push(v.iter().map(|c| c.mul(&inv)).collect());
    }

    Ok(TildeModule { n_root, k, chars, zero_pos, t1, t0, pi1, x1, y1, eps_rows })
}

impl TildeModule {
    pub fn dim(&self) -> usize {
        self.chars.len()
    }

    fn order(&self) -> u32 {
        u32::try_from(self.n_root).unwrap()
    }

    /// Expand a function (vector of values) in the eigenbasis.
    fn eps_expand(&self, f: &[CC]) -> Result<Vec<CC>> {
        let d = self.dim();
        let mat = Matrix::from_rows(
            (0..d)
                .map(|j| (0..d).map(|i| self.eps_rows[i][j].clone()).collect())
                .collect(),
        );
        mat.solve_unique(f)
            .ok_or_else(|| Error::SingularSystem("eigenbasis is degenerate".into()))
    }

    /// The Fourier pairing on the reduced module.
    pub fn fourier(&self, f: &[CC], g: &[CC]) -> Result<CC> {
        let c = self.eps_expand(g)?;
        let mut out = CC::zero();
        for (j, cj) in c.iter().enumerate() {
            out = out.add(&cj.mul(&f[j]));
        }
        Ok(out)
    }

    /// Gram matrix of the Fourier pairing on delta functions.
    pub fn fourier_gram(&self) -> Result<Matrix<CC>> {
        let d = self.dim();
        let mut m = Matrix::zero(d, d);
        for i in 0..d {
            let mut delta = vec![CC::zero(); d];
            delta[i] = CC::one();
            for j in 0..d {
                let mut dj = vec![CC::zero(); d];
                dj[j] = CC::one();
                m[(i, j)] = self.fourier(&delta, &dj)?;
            }
        }
        Ok(m)
    }

    /// The restricted pairing on W-invariant functions:
    /// `<f, g>' = sum_p mu(p) f(p) g(p)`.
    pub fn restricted_pairing(&self, f: &[CC], g: &[CC]) -> CC {
        let q = |e: i64| -> CC { cc_zeta(self.order(), e) };
        let mut out = CC::zero();
        for (i, &e) in self.chars.iter().enumerate() {
            let mut mu = CC::one();
            for step in 0..self.k {
                mu = mu.mul(&CC::one().sub(&q(e + step)));
            }
            for step in 1..=self.k {
                mu = mu.mul(&CC::one().sub(&q(-e + step)));
            }
            out = out.add(&mu.mul(&f[i]).mul(&g[i]));
        }
        out
    }

    /// Basis of the W-invariant subspace (orbit indicator functions).
    pub fn invariant_basis(&self) -> Vec<Vec<CC>> {
        let d = self.dim();
        let modn = |e: i64| e.rem_euclid(self.n_root);
        let mut done = vec![false; d];
        let mut out = Vec::new();
        for i in 0..d {
            if done[i] {
                continue;
            }
            let mut v = vec![CC::zero(); d];
            v[i] = CC::one();
            done[i] = true;
            if let Some(j) = self.chars.iter().position(|&x| x == modn(-self.chars[i])) {
                if j != i {
                    v[j] = CC::one();
                    done[j] = true;
                }
            }
            out.push(v);
        }
        out
    }

    /// The Gaussian diagonal `q^{(z,z)/2}` over the characters (A1: `q^{e^2/4}`,
    /// an integer power of `q_0 = zeta_N` since `m = 2`).
    pub fn gauss_diag(&self) -> Matrix<CC> {
        let d = self.dim();
        let mut m = Matrix::zero(d, d);
        for (i, &e) in self.chars.iter().enumerate() {
            // q^{e^2/4} = q0^{2m e^2 / 4} = q0^{e^2} for m = 2.
            m[(i, i)] = cc_zeta(self.order(), e * e);
        }
        m
    }

    /// The SL(2,Z) data: `T_+`, `T_- = P T_+^{-1} P^{-1}`, `Omega`.
    pub fn sl2_matrices(&self) -> Result<(Matrix<CC>, Matrix<CC>, Matrix<CC>)> {
        let tplus = self.gauss_diag();
        let d = self.dim();
        let p = Matrix::from_rows(
            (0..d)
                .map(|j| (0..d).map(|i| self.eps_rows[i][j].clone()).collect::<Vec<_>>())
                .collect(),
        )
        .transpose();
        // p rows are eps-function values: p[i][j] = eps_i(beta_j).
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::SingularSystem("Pi matrix is singular".into()))?;
        let tplus_inv = tplus
            .inverse()
            .expect("Gaussian diagonal is invertible");
        let tminus = p.mul(&tplus_inv).mul(&pinv);
        let omega = tplus_inv.mul(&tminus).mul(&tplus_inv);
        Ok((tplus, tminus, omega))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::Algebra;
    use crate::rootsys::{Family, RootSystem};
    use crate::weyl::Weyl;

    fn mac(f: Family, n: usize) -> Macdonald {
        Macdonald::new(Algebra::new(Weyl::new(RootSystem::new(f, n).unwrap())))
    }

    #[test]
    fn context_a1_n3() {
        let m = mac(Family::A, 1);
        let ctx = build_context(&m, 3, None).unwrap();
        assert!(ctx.coprime_mode);
        assert_eq!(ctx.order, 3);
        assert_eq!(ctx.bn_order, 3);
        // K_3 = 3 Z b_1
        assert_eq!(ctx.k_basis, vec![vec![3]]);
        assert_eq!(ctx.b_fund.len(), 6);
        // the fundamental set is {0, +-1, +-2, 3}
        let set: std::collections::BTreeSet<i64> =
            ctx.b_fund.iter().map(|w| w.0[0]).collect();
        assert_eq!(set, [0i64, 1, -1, 2, -2, 3].into_iter().collect());
    }

    #[test]
    fn context_a1_n5() {
        let m = mac(Family::A, 1);
        let ctx = build_context(&m, 5, None).unwrap();
        assert_eq!(ctx.b_fund.len(), 10);
    }

    #[test]
    fn tilde_module_n7_k1() {
        let m = mac(Family::A, 1);
        let tm = build_tilde_module(&m, 7, 1).unwrap();
        assert_eq!(tm.dim(), 5);
        // contains the point 0 (character -k)
        assert_eq!(tm.chars[tm.zero_pos], 6);
        // quadratic relation for T_1 and T_0
        let d = tm.dim();
        let id = Matrix::<CC>::identity(d);
        let th = cc_zeta(7, 4); // t^(1/2) = q^(1*4), half = 4
        let thi = cc_zeta(7, -4);
        for t in [&tm.t1, &tm.t0] {
            let z = t.sub(&id.scale(&th)).mul(&t.add(&id.scale(&thi)));
            assert_eq!(z, Matrix::zero(d, d));
        }
        // eigenfunctions normalized at zero; fourier pairing diagonal there
        for (i, row) in tm.eps_rows.iter().enumerate() {
            assert!(row[tm.zero_pos].is_one(), "eps {i} not normalized");
        }
        let gram = tm.fourier_gram().unwrap();
        assert!(!gram.det().is_zero());
        // [[eps_i, delta_j]] = C_i delta_ij
        for i in 0..d {
            for j in 0..d {
                let mut dj = vec![CC::zero(); d];
                dj[j] = CC::one();
                let v = tm.fourier(&tm.eps_rows[i], &dj).unwrap();
                if i != j {
                    assert!(v.is_zero(), "({i},{j})");
                } else {
                    assert!(!v.is_zero(), "C_{i}");
                }
            }
        }
        // restricted pairing nondegenerate on the invariant subspace
        let inv = tm.invariant_basis();
        let g = Matrix::from_rows(
            inv.iter()
                .map(|f| inv.iter().map(|h| tm.restricted_pairing(f, h)).collect())
                .collect(),
        );
        assert!(!g.det().is_zero());
    }

    #[test]
    fn sl2_checks_n7_k1() {
        let m = mac(Family::A, 1);
        let tm = build_tilde_module(&m, 7, 1).unwrap();
        let (tp, tmy, om) = tm.sl2_matrices().unwrap();
        let tpi = tp.inverse().unwrap();
        // tau_+ conjugation on Y_r: T+ Y T+^{-1} = X Y q^{-(b,b)/2}; for A1
        // (b_1,b_1)/2 = 1/4, q^{-1/4} = q0^{-1}.
        let lhs = tp.mul(&tm.y1).mul(&tpi);
        let rhs = tm.x1.mul(&tm.y1).scale(&cc_zeta(7, -1));
        assert_eq!(lhs, rhs);
        // gato: T+ T_0 T+^{-1} = X_0^{-1} T_0^{-1} with X_0 = q X_theta^{-1},
        // X_theta = X_{a_1} = x1^2.
        let t0inv = {
            let thd = cc_zeta(7, 4).sub(&cc_zeta(7, -4));
            tm.t0.sub(&Matrix::identity(tm.dim()).scale(&thd))
        };
        let x0inv = tm.x1.mul(&tm.x1).scale(&cc_zeta(7, -4)); // q^{-1} x_theta
        let lhs = tp.mul(&tm.t0).mul(&tpi);
        let rhs = x0inv.mul(&t0inv);
        assert_eq!(lhs, rhs);
        // tau_+ fixes T_1
        assert_eq!(tp.mul(&tm.t1).mul(&tpi), tm.t1);
        // braid up to a scalar per block of T_1^2
        let t1sq = tm.t1.mul(&tm.t1);
        let m1 = tpi.mul(&tmy).mul(&tpi);
        let m2 = tmy.mul(&tpi).mul(&tmy);
        for lam in [cc_zeta(7, 1), cc_zeta(7, -1)] {
            let mut shift = t1sq.clone();
            for i in 0..tm.dim() {
                shift[(i, i)] = shift[(i, i)].sub(&lam);
            }
            let block = shift.transpose().kernel();
            if block.is_empty() {
                continue;
            }
            let v0 = &block[0];
            let a = m1.transpose().mul_vec(v0);
            let b = m2.transpose().mul_vec(v0);
            let pos = b.iter().position(|x| !x.is_zero()).unwrap();
            let c = a[pos].div(&b[pos]);
            for v in &block {
                let av = m1.transpose().mul_vec(v);
                let bv = m2.transpose().mul_vec(v);
                for idx in 0..tm.dim() {
                    assert_eq!(av[idx], bv[idx].mul(&c), "blockwise scalar failed");
                }
            }
        }
        let _ = om;
    }
}
