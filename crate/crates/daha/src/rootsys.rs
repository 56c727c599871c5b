//! Static root-system data for the reduced irreducible types A-G.
//!
//! Long roots are normalized to squared length 2. All tables are exact: the
//! euclidean model of each family carries a rational scaling of the standard
//! dot product so that every coordinate and pairing stays rational.
//!
//! Weights are stored by their coordinates in the dual fundamental basis
//! `b_1..b_n` (so the `j`-th coordinate of `z` is `(z, alpha_j)`), roots by
//! their coordinates in the simple-root basis. With these conventions the
//! weight-root pairing is an integer dot product and the Weyl group acts by
//! integer matrices on both sides.

use crate::scalar::{rat, rat_int, Rat};
use crate::{Error, Result};
use num::{One, Zero};
use smallvec::SmallVec;
use std::collections::HashMap;
use std::fmt;

pub const MAX_RANK_DEFAULT: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(Error::InvalidType(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        };
        write!(f, "{s}")
    }
}

/// Parse a combined type label like `A1` or `B2`.
pub fn parse_type(s: &str) -> Result<(Family, usize)> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidType("empty type".into()));
    }
    let fam = Family::parse(&s[..1])?;
    let rank: usize = s[1..]
        .parse()
        .map_err(|_| Error::InvalidType(format!("bad rank in {s:?}")))?;
    Ok((fam, rank))
}

/// Coordinates in the `b_i` basis.
pub type WCoords = SmallVec<[i64; 8]>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub WCoords);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(SmallVec::from_elem(0, n))
    }

    pub fn from_slice(k: &[i64]) -> Self {
        Weight(SmallVec::from_slice(k))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    /// Basis coweight `b_{i}` (zero-based index).
    pub fn basis(n: usize, i: usize) -> Weight {
        let mut k = SmallVec::from_elem(0, n);
        k[i] = 1;
        Weight(k)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// One root, in both coordinate systems.
#[derive(Clone, Debug)]
pub struct Root {
    /// Coordinates in the simple-root basis.
    pub m: Vec<i64>,
    /// Length class index into `RootSystem::classes` (0 = long).
    pub class: usize,
    pub positive: bool,
    /// Index of the negated root in the root list.
    pub neg: usize,
}

#[derive(Clone)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    /// Ambient euclidean dimension of the coordinate model.
    pub dim: usize,
    /// The euclidean form is `form_scale` times the standard dot product.
    pub form_scale: Rat,
    /// Euclidean coordinates of the simple roots.
    pub simple_euclid: Vec<Vec<Rat>>,
    /// Euclidean coordinates of the dual fundamental weights `b_i`.
    pub coweight_euclid: Vec<Vec<Rat>>,
    /// Cartan integers `cartan[i][j] = <alpha_i, alpha_j^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// Gram matrix `(b_i, b_j)`.
    pub gram_b: Vec<Vec<Rat>>,
    /// All roots, positives first; simple root `i` sits at index `i`.
    pub roots: Vec<Root>,
    root_index: HashMap<Vec<i64>, usize>,
    /// Indices of the positive roots.
    pub positive: Vec<usize>,
    /// Index of the highest root.
    pub theta: usize,
    /// Distinct squared lengths, descending; `classes[0] = 2`.
    pub classes: Vec<Rat>,
    /// Length class of each simple root.
    pub simple_class: Vec<usize>,
    /// `(a_i, alpha_j)` rows: coordinates of the simple coroots in the b-basis.
    pub acoords: Vec<Vec<i64>>,
    /// The constant `m` fixing the ring `Z[q^{1/m}]` of the representation.
    pub m: i64,
    /// Order of `Pi = B/A`.
    pub pi_order: i64,
    /// Minuscule node indices (zero-based).
    pub o_star: Vec<usize>,
    /// `rho_nu` per class, in rational b-coordinates.
    pub rho: Vec<Vec<Rat>>,
    /// `r_nu = (2/nu) rho_nu`, integer coweights.
    pub r_nu: Vec<Weight>,
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn euclid_models(family: Family, n: usize) -> Result<(usize, Rat, Vec<Vec<Rat>>)> {
    let e = |dim: usize, entries: &[(usize, i64, i64)]| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); dim];
        for &(i, num, den) in entries {
            v[i] = rat(num, den);
        }
        v
    };
    match (family, n) {
        (Family::A, n) if n >= 1 => {
            let dim = n + 1;
            let simples = (0..n)
                .map(|i| e(dim, &[(i, 1, 1), (i + 1, -1, 1)]))
                .collect();
            Ok((dim, Rat::one(), simples))
        }
        (Family::B, n) if n >= 2 => {
            let mut simples: Vec<Vec<Rat>> = (0..n - 1)
                .map(|i| e(n, &[(i, 1, 1), (i + 1, -1, 1)]))
                .collect();
            simples.push(e(n, &[(n - 1, 1, 1)]));
            Ok((n, Rat::one(), simples))
        }
        (Family::C, n) if n >= 2 => {
            let mut simples: Vec<Vec<Rat>> = (0..n - 1)
                .map(|i| e(n, &[(i, 1, 1), (i + 1, -1, 1)]))
                .collect();
            simples.push(e(n, &[(n - 1, 2, 1)]));
            Ok((n, rat(1, 2), simples))
        }
        (Family::D, n) if n >= 3 => {
            let mut simples: Vec<Vec<Rat>> = (0..n - 1)
                .map(|i| e(n, &[(i, 1, 1), (i + 1, -1, 1)]))
                .collect();
            simples.push(e(n, &[(n - 2, 1, 1), (n - 1, 1, 1)]));
            Ok((n, Rat::one(), simples))
        }
        (Family::E, n) if (6..=8).contains(&n) => {
            // Bourbaki numbering inside R^8.
            let mut simples = Vec::new();
            let mut a1 = vec![rat(-1, 2); 8];
            a1[0] = rat(1, 2);
            a1[7] = rat(1, 2);
            simples.push(a1);
            simples.push(e(8, &[(0, 1, 1), (1, 1, 1)]));
            simples.push(e(8, &[(1, 1, 1), (0, -1, 1)]));
            for i in 0..5 {
                simples.push(e(8, &[(i + 2, 1, 1), (i + 1, -1, 1)]));
            }
            simples.truncate(n);
            Ok((8, Rat::one(), simples))
        }
        (Family::F, 4) => {
            let simples = vec![
                e(4, &[(1, 1, 1), (2, -1, 1)]),
                e(4, &[(2, 1, 1), (3, -1, 1)]),
                e(4, &[(3, 1, 1)]),
                vec![rat(1, 2), rat(-1, 2), rat(-1, 2), rat(-1, 2)],
            ];
            Ok((4, Rat::one(), simples))
        }
        (Family::G, 2) => {
            let simples = vec![
                e(3, &[(0, 1, 1), (1, -1, 1)]),
                e(3, &[(0, -2, 1), (1, 1, 1), (2, 1, 1)]),
            ];
            Ok((3, rat(1, 3), simples))
        }
        _ => Err(Error::InvalidType(format!("{family}{n} is not a valid irreducible type"))),
    }
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<RootSystem> {
        Self::with_rank_limit(family, rank, MAX_RANK_DEFAULT)
    }

    pub fn with_rank_limit(family: Family, rank: usize, limit: usize) -> Result<RootSystem> {
        if rank > limit {
            return Err(Error::InvalidType(format!(
                "rank {rank} exceeds the configured limit {limit}"
            )));
        }
        let (dim, form_scale, simple_euclid) = euclid_models(family, rank)?;
        let n = rank;
        let pair = |u: &[Rat], w: &[Rat]| -> Rat { &form_scale * dot(u, w) };

        // Root gram and Cartan integers.
        let mut gram_root = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                gram_root[i][j] = pair(&simple_euclid[i], &simple_euclid[j]);
            }
        }
        let two = rat_int(2);
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = &two * &gram_root[i][j] / &gram_root[j][j];
                if !c.is_integer() {
                    return Err(Error::InvalidType("non-integral Cartan entry".into()));
                }
                cartan[i][j] = crate::scalar::to_i64(&c);
            }
        }

        // Length classes, descending squared length; index 0 is the long class.
        let mut classes: Vec<Rat> = Vec::new();
        for i in 0..n {
            let nu = gram_root[i][i].clone();
            if !classes.contains(&nu) {
                classes.push(nu);
            }
        }
        classes.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if classes[0] != two {
            return Err(Error::InvalidType("long roots must have squared length 2".into()));
        }
        let simple_class: Vec<usize> = (0..n)
            .map(|i| classes.iter().position(|c| *c == gram_root[i][i]).unwrap())
            .collect();

        // Reflection closure over the simple-root coordinates.
        // s_i sends m to m' with m'_i = m_i - sum_j m_j cartan[j][i].
        let reflect_m = |m: &[i64], i: usize| -> Vec<i64> {
            let mut out = m.to_vec();
            let c: i64 = (0..n).map(|j| m[j] * cartan[j][i]).sum();
            out[i] -= c;
            out
        };
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut mlist: Vec<Vec<i64>> = Vec::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 0..n {
            let mut m = vec![0i64; n];
            m[i] = 1;
            seen.insert(m.clone(), mlist.len());
            mlist.push(m.clone());
            queue.push(m);
        }
        while let Some(m) = queue.pop() {
            for i in 0..n {
                let r = reflect_m(&m, i);
                if !seen.contains_key(&r) {
                    seen.insert(r.clone(), mlist.len());
                    mlist.push(r.clone());
                    queue.push(r);
                }
            }
        }
        // Order: positives (by height then lex), then negatives.
        let is_pos = |m: &[i64]| -> bool {
            let has_pos = m.iter().any(|&x| x > 0);
            let has_neg = m.iter().any(|&x| x < 0);
            assert!(
                has_pos ^ has_neg,
                "root with mixed signs in simple-root coordinates"
            );
            has_pos
        };
        let mut pos_ms: Vec<Vec<i64>> = mlist.iter().filter(|m| is_pos(m)).cloned().collect();
        pos_ms.sort_by_key(|m| {
            // Simple roots first (so simple root i has index i), then by height.
            let height: i64 = m.iter().sum();
            let is_simple = m.iter().sum::<i64>() == 1;
            (
                if is_simple { m.iter().position(|&x| x == 1).unwrap() } else { n },
                height,
                m.clone(),
            )
        });
        let class_of_m = |m: &[i64]| -> usize {
            let mut len = Rat::zero();
            for i in 0..n {
                for j in 0..n {
                    len += &gram_root[i][j] * rat_int(m[i] * m[j]);
                }
            }
            classes.iter().position(|c| *c == len).expect("unknown root length")
        };
        let npos = pos_ms.len();
        let mut roots = Vec::with_capacity(2 * npos);
        let mut root_index = HashMap::new();
        for (idx, m) in pos_ms.iter().enumerate() {
            roots.push(Root { m: m.clone(), class: class_of_m(m), positive: true, neg: idx + npos });
            root_index.insert(m.clone(), idx);
        }
        for (idx, m) in pos_ms.iter().enumerate() {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            roots.push(Root { m: neg.clone(), class: roots[idx].class, positive: false, neg: idx });
            root_index.insert(neg, idx + npos);
        }
        let positive: Vec<usize> = (0..npos).collect();

        // Highest root: maximal height (it is unique and long).
        let theta = positive
            .iter()
            .copied()
            .max_by_key(|&i| roots[i].m.iter().sum::<i64>())
            .unwrap();
        if roots[theta].class != 0 {
            return Err(Error::InvalidType("highest root is not long".into()));
        }

        // Dual fundamental weights: rows of the inverse root gram.
        let ginv = invert_rational(&gram_root)
            .ok_or_else(|| Error::InvalidType("degenerate Cartan form".into()))?;
        let mut coweight_euclid = vec![vec![Rat::zero(); dim]; n];
        for i in 0..n {
            for k in 0..n {
                for d in 0..dim {
                    coweight_euclid[i][d] += &ginv[i][k] * &simple_euclid[k][d];
                }
            }
        }
        let mut gram_b = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                gram_b[i][j] = pair(&coweight_euclid[i], &coweight_euclid[j]);
            }
        }

        // acoords[i][j] = (a_i, alpha_j) = cartan[j][i].
        let acoords: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| cartan[j][i]).collect())
            .collect();

        let pi_order = int_det(&cartan).abs();

        let m_const = match family {
            Family::B => 1,
            Family::C => {
                if rank % 2 == 0 {
                    1
                } else {
                    2
                }
            }
            Family::D => {
                if rank % 2 == 0 {
                    2
                } else {
                    pi_order
                }
            }
            _ => pi_order,
        };

        // Minuscule nodes: coefficient of alpha_i in theta equals 1.
        let o_star: Vec<usize> = (0..n).filter(|&i| roots[theta].m[i] == 1).collect();

        // rho_nu in b-coordinates: half the sum of the positive roots of the
        // class; the j-th coordinate of a root alpha is (alpha, alpha_j).
        let mut rho = vec![vec![Rat::zero(); n]; classes.len()];
        for &ri in &positive {
            let c = roots[ri].class;
            for j in 0..n {
                let mut kj = Rat::zero();
                for i in 0..n {
                    kj += &gram_root[i][j] * rat_int(roots[ri].m[i]);
                }
                rho[c][j] += kj / rat_int(2);
            }
        }
        let mut r_nu = Vec::new();
        for (c, nu) in classes.iter().enumerate() {
            let factor = &two / nu;
            let coords: WCoords = (0..n)
                .map(|j| {
                    let v = &factor * &rho[c][j];
                    assert!(v.is_integer(), "r_nu must lie in the coweight lattice");
                    crate::scalar::to_i64(&v)
                })
                .collect();
            r_nu.push(Weight(coords));
        }

        Ok(RootSystem {
            family,
            rank,
            dim,
            form_scale,
            simple_euclid,
            coweight_euclid,
            cartan,
            gram_b,
            roots,
            root_index,
            positive,
            theta,
            classes,
            simple_class,
            acoords,
            m: m_const,
            pi_order,
            o_star,
            rho,
            r_nu,
        })
    }

    pub fn n_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Squared length of class `c`.
    pub fn nu(&self, c: usize) -> &Rat {
        &self.classes[c]
    }

    /// `2/nu` for class `c` (1, 2 or 3).
    pub fn two_over_nu(&self, c: usize) -> i64 {
        crate::scalar::to_i64(&(rat_int(2) / &self.classes[c]))
    }

    /// Euclidean pairing of two ambient vectors.
    pub fn pair_euclid(&self, u: &[Rat], w: &[Rat]) -> Result<Rat> {
        if u.len() != self.dim || w.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "expected ambient dimension {}",
                self.dim
            )));
        }
        Ok(&self.form_scale * dot(u, w))
    }

    /// `(z, z')` for two weights in b-coordinates.
    pub fn pair_ww(&self, a: &Weight, b: &Weight) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b.0[j] == 0 {
                    continue;
                }
                s += &self.gram_b[i][j] * rat_int(a.0[i] * b.0[j]);
            }
        }
        s
    }

    /// `(z, z')` where either side may be rational b-coordinates.
    pub fn pair_qq(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if !a[i].is_zero() && !b[j].is_zero() {
                    s += &self.gram_b[i][j] * &a[i] * &b[j];
                }
            }
        }
        s
    }

    /// `(b, alpha)` for a weight and a root: integer.
    pub fn pair_w_root(&self, w: &Weight, root: usize) -> i64 {
        self.roots[root]
            .m
            .iter()
            .zip(&w.0)
            .map(|(m, k)| m * k)
            .sum()
    }

    /// `(b, alpha^vee)` for a weight and the coroot of `root`: integer.
    pub fn pair_w_coroot(&self, w: &Weight, root: usize) -> i64 {
        self.two_over_nu(self.roots[root].class) * self.pair_w_root(w, root)
    }

    /// The coroot `alpha^vee` as an element of the coweight lattice.
    pub fn coroot_weight(&self, root: usize) -> Weight {
        let factor = self.two_over_nu(self.roots[root].class);
        let n = self.rank;
        let coords: WCoords = (0..n)
            .map(|j| {
                let mut kj = Rat::zero();
                for i in 0..n {
                    if self.roots[root].m[i] != 0 {
                        // (alpha, alpha_j) = sum_i m_i (alpha_i, alpha_j)
                        kj += self.gram_root_entry(i, j) * rat_int(self.roots[root].m[i]);
                    }
                }
                let v = kj * rat_int(factor);
                assert!(v.is_integer(), "coroot must lie in the coweight lattice");
                crate::scalar::to_i64(&v)
            })
            .collect();
        Weight(coords)
    }

    fn gram_root_entry(&self, i: usize, j: usize) -> Rat {
        // (alpha_i, alpha_j) = cartan[i][j] * nu_j / 2
        rat_int(self.cartan[i][j]) * &self.classes[self.simple_class[j]] / rat_int(2)
    }

    /// `(alpha, beta)` for two roots.
    pub fn pair_roots(&self, r1: usize, r2: usize) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.rank {
            if self.roots[r1].m[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if self.roots[r2].m[j] != 0 {
                    s += self.gram_root_entry(i, j)
                        * rat_int(self.roots[r1].m[i] * self.roots[r2].m[j]);
                }
            }
        }
        s
    }

    /// Cartan integer `<alpha_{r1}, alpha_{r2}^vee>`.
    pub fn cartan_pair(&self, r1: usize, r2: usize) -> i64 {
        let v = self.pair_roots(r1, r2) * rat_int(self.two_over_nu(self.roots[r2].class));
        crate::scalar::to_i64(&v)
    }

    /// Index of a root given simple-root coordinates.
    pub fn root_by_m(&self, m: &[i64]) -> Option<usize> {
        self.root_index.get(m).copied()
    }

    /// Apply simple reflection `i` to a root, returning the new index.
    pub fn reflect_root(&self, root: usize, i: usize) -> usize {
        let m = &self.roots[root].m;
        let n = self.rank;
        let c: i64 = (0..n).map(|j| m[j] * self.cartan[j][i]).sum();
        let mut out = m.clone();
        out[i] -= c;
        *self.root_index.get(&out).expect("reflection closure")
    }

    /// Apply simple reflection `i` to a weight.
    pub fn reflect_weight(&self, w: &Weight, i: usize) -> Weight {
        let ki = w.0[i];
        if ki == 0 {
            return w.clone();
        }
        let mut out = w.clone();
        for j in 0..self.rank {
            out.0[j] -= ki * self.acoords[i][j];
        }
        out
    }

    pub fn is_antidominant(&self, w: &Weight) -> bool {
        w.0.iter().all(|&k| k <= 0)
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        w.0.iter().all(|&k| k >= 0)
    }

    /// Membership of a weight in the coroot lattice `A`, returning the
    /// integer coordinates along the simple coroots when it lies there.
    pub fn in_coroot_lattice(&self, w: &Weight) -> Option<Vec<i64>> {
        // Solve n = (acoords)^T-style system: w_j = sum_i n_i acoords[i][j].
        let n = self.rank;
        let mut mat = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                mat[j][i] = rat_int(self.acoords[i][j]);
            }
        }
        let rhs: Vec<Rat> = w.0.iter().map(|&x| rat_int(x)).collect();
        let sol = solve_rational(&mat, &rhs)?;
        let mut out = Vec::with_capacity(n);
        for v in sol {
            if !v.is_integer() {
                return None;
            }
            out.push(crate::scalar::to_i64(&v));
        }
        Some(out)
    }

    /// `b <= c` in the dominance order: `c - b` in `A_+`.
    pub fn leq(&self, b: &Weight, c: &Weight) -> bool {
        match self.in_coroot_lattice(&c.sub(b)) {
            Some(coords) => coords.iter().all(|&x| x >= 0),
            None => false,
        }
    }

    /// `rho_nu(class)` dotted with a weight, exact rational.
    pub fn pair_rho_w(&self, class: usize, w: &Weight) -> Rat {
        let mut s = Rat::zero();
        for j in 0..self.rank {
            if w.0[j] != 0 {
                // (rho_nu, w): rho in b-coords paired through the gram matrix
                for i in 0..self.rank {
                    s += &self.rho[class][i] * &self.gram_b[i][j] * rat_int(w.0[j]);
                }
            }
        }
        s
    }
}

fn invert_rational(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            for j in 0..n {
                row.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for j in 0..2 * n {
            aug[c][j] = &aug[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..2 * n {
                    let t = &aug[c][j] * &f;
                    aug[i][j] = &aug[i][j] - t;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn solve_rational(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for j in 0..=n {
            aug[c][j] = &aug[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=n {
                    let t = &aug[c][j] * &f;
                    aug[i][j] = &aug[i][j] - t;
                }
            }
        }
    }
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mq: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| row.iter().map(|&x| rat_int(x)).collect())
        .collect();
    let mut aug = mq;
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !aug[i][c].is_zero()) else {
            return 0;
        };
        if p != c {
            aug.swap(c, p);
            det = -det;
        }
        det *= &aug[c][c];
        let inv = aug[c][c].recip();
        for i in (c + 1)..n {
            if !aug[i][c].is_zero() {
                let f = &aug[i][c] * &inv;
                for j in c..n {
                    let t = &aug[c][j] * &f;
                    aug[i][j] = &aug[i][j] - t;
                }
            }
        }
    }
    crate::scalar::to_i64(&det)
}
