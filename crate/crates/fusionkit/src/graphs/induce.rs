//! Reconstruction of module graphs from an algebra object, and the
//! nonnegative-integer Gram factorization it rests on.
//!
//! Given the algebra object F = Γ₀ as a multiset of irreps, the essential
//! matrix ε = ε₀ satisfies εεᵗ = M with M_{λμ} = Σ_ν N_{λμ̄}^ν F_ν. We factor
//! M into r_E nonnegative integer columns, then search for a generator
//! matrix G with εG = N_{(1,0)}ε whose annular family is nonnegative and
//! whose traces reproduce the exponents.

use nalgebra::DMatrix;

use crate::fusion::{recursion, FusionSystem};
use crate::linalg::{self, IMat};

/// Search stopped after exhausting its node budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exhausted {
    /// Number of rows placed on the deepest branch reached.
    pub deepest: usize,
    pub nodes: u64,
}

/// Node counter shared by a search.
#[derive(Debug, Clone)]
pub struct Budget {
    pub limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}

/// M_{λμ} = Σ_ν N_{λμ̄}^ν F_ν.
pub fn gram_of_object(sys: &FusionSystem, obj: &[i64]) -> Vec<Vec<i64>> {
    let r = sys.rank();
    (0..r)
        .map(|i| {
            let n = sys.n(i);
            (0..r)
                .map(|j| {
                    let jb = sys.conj_index(j);
                    (0..r).map(|v| n[(jb, v)] * obj[v]).sum()
                })
                .collect()
        })
        .collect()
}

/// Partitions of `n` into squares v², parts non-increasing, at most `max`.
fn square_parts(n: i64, max: i64, out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    let mut v = max.min(isqrt(n));
    while v >= 1 {
        cur.push(v);
        square_parts(n - v * v, v, out, cur);
        cur.pop();
        v -= 1;
    }
}

pub(crate) fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Outcome of a completed row assignment handed to the acceptor.
pub type Factor = Vec<Vec<i64>>;

struct Factorizer<'a> {
    m: &'a dyn Fn(usize, usize) -> i64,
    order: &'a [usize],
    target: usize,
    rows: Vec<Option<Vec<i64>>>,
    budget: &'a mut Budget,
    deepest: usize,
    /// Rows forming a basis of the done rows once the rank is `target`,
    /// with the f64 inverse of their matrix.
    basis: Option<(Vec<usize>, DMatrix<f64>)>,
}

impl Factorizer<'_> {
    /// Nonnegative c with ⟨c, row_t⟩ = m(i, t) for done rows t and
    /// ‖c‖² ≤ m(i, i).
    fn candidates(&mut self, i: usize, pos: usize, ncols: usize) -> Vec<Vec<i64>> {
        let done = &self.order[..pos];
        let b: Vec<i64> = done.iter().map(|&t| (self.m)(i, t)).collect();
        let norm_cap = (self.m)(i, i);
        if let Some((brows, inv)) = &self.basis {
            let rhs = nalgebra::DVector::from_iterator(brows.len(), brows.iter().map(|&t| (self.m)(i, t) as f64));
            let x = inv * rhs;
            let mut c = Vec::with_capacity(ncols);
            for v in x.iter() {
                let r = v.round();
                if (v - r).abs() > 1e-6 || r < -0.5 {
                    return vec![];
                }
                c.push(r as i64);
            }
            if c.iter().map(|v| v * v).sum::<i64>() > norm_cap {
                return vec![];
            }
            let ok = done.iter().zip(&b).all(|(&t, &bt)| {
                let rt = self.rows[t].as_ref().expect("done row");
                c.iter().zip(rt).map(|(x, y)| x * y).sum::<i64>() == bt
            });
            return if ok { vec![c] } else { vec![] };
        }
        let rt: Vec<&Vec<i64>> = done.iter().map(|&t| self.rows[t].as_ref().expect("done row")).collect();
        let at = |t: usize, col: usize| rt[t].get(col).copied().unwrap_or(0);
        let touch: Vec<Vec<usize>> =
            (0..ncols).map(|col| (0..done.len()).filter(|&t| at(t, col) != 0).collect()).collect();
        // last_touch[t]: last column with a nonzero entry in row t.
        let mut last_touch: Vec<Option<usize>> = vec![None; done.len()];
        for (col, ts) in touch.iter().enumerate() {
            for &t in ts {
                last_touch[t] = Some(col);
            }
        }
        // Rows with b_t > 0 but no support can never be satisfied.
        if (0..done.len()).any(|t| last_touch[t].is_none() && b[t] != 0) {
            return vec![];
        }
        // Columns identical on all done rows are interchangeable: force
        // non-increasing values among them.
        let prev_same: Vec<Option<usize>> = (0..ncols)
            .map(|col| (0..col).rev().find(|&p| (0..done.len()).all(|t| at(t, p) == at(t, col))))
            .collect();
        let mut out = Vec::new();
        let mut c = vec![0i64; ncols];
        let mut partial = vec![0i64; done.len()];
        #[allow(clippy::too_many_arguments)]
        fn dfs(
            col: usize,
            norm: i64,
            cap: i64,
            c: &mut Vec<i64>,
            partial: &mut Vec<i64>,
            b: &[i64],
            touch: &[Vec<usize>],
            last_touch: &[Option<usize>],
            prev_same: &[Option<usize>],
            at: &dyn Fn(usize, usize) -> i64,
            out: &mut Vec<Vec<i64>>,
        ) {
            if col == c.len() {
                if partial.iter().zip(b).all(|(p, q)| p == q) {
                    out.push(c.clone());
                }
                return;
            }
            let mut maxv = isqrt(cap - norm);
            for &t in &touch[col] {
                maxv = maxv.min((b[t] - partial[t]) / at(t, col));
            }
            if let Some(p) = prev_same[col] {
                maxv = maxv.min(c[p]);
            }
            // Rows whose last support is this column must close exactly.
            let closing: Vec<usize> = touch[col].iter().copied().filter(|&t| last_touch[t] == Some(col)).collect();
            let mut v = maxv;
            while v >= 0 {
                let fits = closing.iter().all(|&t| partial[t] + v * at(t, col) == b[t]);
                if fits {
                    c[col] = v;
                    for &t in &touch[col] {
                        partial[t] += v * at(t, col);
                    }
                    dfs(col + 1, norm + v * v, cap, c, partial, b, touch, last_touch, prev_same, at, out);
                    for &t in &touch[col] {
                        partial[t] -= v * at(t, col);
                    }
                }
                v -= 1;
            }
            c[col] = 0;
        }
        dfs(0, 0, norm_cap, &mut c, &mut partial, &b, &touch, &last_touch, &prev_same, &at, &mut out);
        out
    }

    fn refresh_basis(&mut self, pos: usize, ncols: usize) {
        if self.basis.is_some() || ncols != self.target || self.target == 0 {
            return;
        }
        // Greedy independent rows among the done ones (f64 elimination).
        let mut chosen: Vec<usize> = Vec::new();
        let mut reduced: Vec<Vec<f64>> = Vec::new();
        for &t in &self.order[..pos] {
            let mut v: Vec<f64> = self.rows[t].as_ref().expect("done").iter().map(|&x| x as f64).collect();
            v.resize(ncols, 0.0);
            for r in &reduced {
                let p = r.iter().position(|x| x.abs() > 1e-9).expect("nonzero basis row");
                let f = v[p] / r[p];
                if f != 0.0 {
                    for (a, b) in v.iter_mut().zip(r) {
                        *a -= f * b;
                    }
                }
            }
            if v.iter().any(|x| x.abs() > 1e-7) {
                chosen.push(t);
                reduced.push(v);
                if chosen.len() == ncols {
                    break;
                }
            }
        }
        if chosen.len() == ncols {
            let a = DMatrix::from_fn(ncols, ncols, |i, j| {
                self.rows[chosen[i]].as_ref().expect("done").get(j).copied().unwrap_or(0) as f64
            });
            if let Some(inv) = a.try_inverse() {
                self.basis = Some((chosen, inv));
            }
        }
    }

    fn go(
        &mut self,
        pos: usize,
        ncols: usize,
        accept: &mut dyn FnMut(&Factor) -> bool,
    ) -> Result<Option<Factor>, Exhausted> {
        if !self.budget.tick() {
            return Err(Exhausted { deepest: self.deepest, nodes: self.budget.used });
        }
        self.deepest = self.deepest.max(pos);
        if pos == self.order.len() {
            if ncols != self.target {
                return Ok(None);
            }
            let f: Factor = self
                .rows
                .iter()
                .map(|r| {
                    let mut r = r.clone().unwrap_or_default();
                    r.resize(ncols, 0);
                    r
                })
                .collect();
            return Ok(if accept(&f) { Some(f) } else { None });
        }
        let i = self.order[pos];
        let saved_basis = self.basis.clone();
        for c in self.candidates(i, pos, ncols) {
            let resid = (self.m)(i, i) - c.iter().map(|v| v * v).sum::<i64>();
            let mut parts = Vec::new();
            square_parts(resid, i64::MAX, &mut parts, &mut Vec::new());
            // Many small parts first: unit multiplicities are the common case.
            parts.sort_by_key(|p| std::cmp::Reverse(p.len()));
            for p in parts {
                if ncols + p.len() > self.target {
                    continue;
                }
                let mut row = c.clone();
                row.extend(&p);
                self.rows[i] = Some(row);
                let nc = ncols + p.len();
                self.refresh_basis(pos + 1, nc);
                if let Some(f) = self.go(pos + 1, nc, accept)? {
                    return Ok(Some(f));
                }
                self.basis = saved_basis.clone();
            }
        }
        self.rows[i] = None;
        Ok(None)
    }
}

/// Factor the symmetric matrix `m` (given by entry function, size `n`) as
/// εεᵗ with exactly `target` nonnegative integer columns, visiting rows in
/// `order`; rows left out of `order` must have zero diagonal and come back
/// as zero rows. Returns the first factor accepted by `accept`.
pub fn factor_gram(
    n: usize,
    m: &dyn Fn(usize, usize) -> i64,
    target: usize,
    order: &[usize],
    budget: &mut Budget,
    accept: &mut dyn FnMut(&Factor) -> bool,
) -> Result<Option<Factor>, Exhausted> {
    debug_assert!((0..n).all(|i| order.contains(&i) || m(i, i) == 0), "omitted rows must vanish");
    let mut f = Factorizer { m, order, target, rows: vec![None; n], budget, deepest: 0, basis: None };
    f.go(0, 0, accept)
}

/// All x ≥ 0 with E·x = c, for E a nonnegative integer matrix given by rows.
pub fn nonneg_solutions(e: &[Vec<i64>], c: &[i64], cap: usize) -> Vec<Vec<i64>> {
    let r = e.len();
    let n = e.first().map_or(0, Vec::len);
    let touch: Vec<Vec<usize>> = (0..n).map(|j| (0..r).filter(|&t| e[t][j] != 0).collect()).collect();
    let mut last: Vec<Option<usize>> = vec![None; r];
    for (j, ts) in touch.iter().enumerate() {
        for &t in ts {
            last[t] = Some(j);
        }
    }
    if (0..r).any(|t| last[t].is_none() && c[t] != 0) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut part = vec![0i64; r];
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        j: usize,
        e: &[Vec<i64>],
        c: &[i64],
        touch: &[Vec<usize>],
        last: &[Option<usize>],
        x: &mut Vec<i64>,
        part: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if j == x.len() {
            if part.iter().zip(c).all(|(a, b)| a == b) {
                out.push(x.clone());
            }
            return;
        }
        let mut mx = i64::MAX;
        for &t in &touch[j] {
            mx = mx.min((c[t] - part[t]) / e[t][j]);
        }
        if touch[j].is_empty() {
            mx = 0;
        }
        let mut v = mx;
        while v >= 0 {
            let closes = touch[j].iter().all(|&t| last[t] != Some(j) || part[t] + v * e[t][j] == c[t]);
            if closes {
                x[j] = v;
                for &t in &touch[j] {
                    part[t] += v * e[t][j];
                }
                dfs(j + 1, e, c, touch, last, x, part, out, cap);
                for &t in &touch[j] {
                    part[t] -= v * e[t][j];
                }
            }
            v -= 1;
        }
        x[j] = 0;
    }
    dfs(0, e, c, &touch, &last, &mut x, &mut part, &mut out, cap);
    out
}

/// A reconstructed module: essential matrix, generator and annular family.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// r_A × r_E, (ε)_{λb} = (F_λ)_{0b}.
    pub eps: Vec<Vec<i64>>,
    pub generator: IMat,
    pub annular: Vec<IMat>,
}

fn trace_targets(sys: &FusionSystem, exponents: &[usize]) -> Vec<f64> {
    let s = sys.modular_s();
    (0..sys.rank())
        .map(|l| exponents.iter().map(|&e| (s[(l, e)] / s[(0, e)]).re).sum::<f64>())
        .collect()
}

/// Generator matrices G solving εG = N_gen ε, εGᵗ = N_gen̄ ε, with normal G,
/// nonnegative annular family and Tr F_λ matching the exponents.
pub fn search_generator(
    sys: &FusionSystem,
    eps: &[Vec<i64>],
    exponents: &[usize],
    limit: usize,
) -> Vec<Reconstruction> {
    let r_e = eps.first().map_or(0, Vec::len);
    let e = DMatrix::from_fn(eps.len(), r_e, |i, j| eps[i][j]);
    let ng = sys.n_of(sys.generator());
    let a = ng * &e;
    let b = ng.transpose() * &e;
    let col_of = |m: &IMat, j: usize| (0..m.nrows()).map(|i| m[(i, j)]).collect::<Vec<i64>>();
    let cols: Vec<Vec<Vec<i64>>> = (0..r_e).map(|j| nonneg_solutions(eps, &col_of(&a, j), 100_000)).collect();
    let rows: Vec<Vec<Vec<i64>>> = (0..r_e).map(|j| nonneg_solutions(eps, &col_of(&b, j), 100_000)).collect();
    if cols.iter().chain(rows.iter()).any(Vec::is_empty) {
        return vec![];
    }
    let tr = trace_targets(sys, exponents);
    let mut out = Vec::new();
    let mut g = IMat::zeros(r_e, r_e);
    fn prefix_ok(g: &IMat, i: usize, cols: &[Vec<Vec<i64>>]) -> bool {
        (0..g.ncols()).all(|a| cols[a].iter().any(|c| (0..=i).all(|t| c[t] == g[(t, a)])))
    }
    #[allow(clippy::too_many_arguments)]
    fn bt(
        i: usize,
        g: &mut IMat,
        rows: &[Vec<Vec<i64>>],
        cols: &[Vec<Vec<i64>>],
        sys: &FusionSystem,
        tr: &[f64],
        out: &mut Vec<Reconstruction>,
        eps: &[Vec<i64>],
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let n = g.nrows();
        if i == n {
            if &*g * g.transpose() != g.transpose() * &*g {
                return;
            }
            let Ok(fam) = recursion(sys.kind, sys.irreps(), sys.index_map(), g) else { return };
            if fam.iter().zip(tr).any(|(f, t)| (linalg::trace(f) as f64 - t).abs() > 1e-6) {
                return;
            }
            out.push(Reconstruction { eps: eps.to_vec(), generator: g.clone(), annular: fam });
            return;
        }
        for rw in &rows[i] {
            for (j, v) in rw.iter().enumerate() {
                g[(i, j)] = *v;
            }
            if prefix_ok(g, i, cols) {
                bt(i + 1, g, rows, cols, sys, tr, out, eps, limit);
            }
        }
        for j in 0..n {
            g[(i, j)] = 0;
        }
    }
    bt(0, &mut g, &rows, &cols, sys, &tr, &mut out, eps, limit);
    out
}

/// Reconstruct a module graph with `r_e` vertices from its algebra object
/// `obj` (multiplicity per irrep) and exponents (irrep indices, with
/// multiplicity). The unit vertex is the column with ε_{0b} = 1.
pub fn reconstruct(
    sys: &FusionSystem,
    obj: &[i64],
    r_e: usize,
    exponents: &[usize],
    budget: &mut Budget,
) -> Result<Option<Reconstruction>, Exhausted> {
    let m = gram_of_object(sys, obj);
    let order: Vec<usize> = (0..sys.rank()).collect();
    let mut found: Option<Reconstruction> = None;
    let mut accept = |f: &Factor| {
        let mut sols = search_generator(sys, f, exponents, 1);
        match sols.pop() {
            Some(s) => {
                found = Some(s);
                true
            }
            None => false,
        }
    };
    let entry = |i: usize, j: usize| m[i][j];
    factor_gram(sys.rank(), &entry, r_e, &order, budget, &mut accept)?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{build_fusion, Irrep, Kind};

    #[test]
    fn squares() {
        let mut out = Vec::new();
        square_parts(5, i64::MAX, &mut out, &mut Vec::new());
        assert!(out.contains(&vec![2, 1]));
        assert!(out.contains(&vec![1, 1, 1, 1, 1]));
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
    }

    #[test]
    fn gram_factor_of_identity() {
        let m = [[2, 1], [1, 1]];
        let entry = |i: usize, j: usize| m[i][j];
        let mut budget = Budget::new(1000);
        let f = factor_gram(2, &entry, 2, &[0, 1], &mut budget, &mut |_| true).unwrap().unwrap();
        assert_eq!(f, vec![vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn nonneg_solutions_small() {
        let e = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(nonneg_solutions(&e, &[3, 1], 10), vec![vec![2, 1]]);
        assert!(nonneg_solutions(&e, &[0, 1], 10).is_empty());
    }

    #[test]
    fn reconstruct_d3_from_algebra_object() {
        let sys = build_fusion(Kind::Sl3, 3).unwrap();
        let mut obj = vec![0i64; sys.rank()];
        for w in [Irrep::Sl3(0, 0), Irrep::Sl3(3, 0), Irrep::Sl3(0, 3)] {
            obj[sys.index(w).unwrap()] = 1;
        }
        let exps: Vec<usize> = [(0, 0), (3, 0), (0, 3), (1, 1), (1, 1), (1, 1)]
            .iter()
            .map(|&(p, q)| sys.index(Irrep::Sl3(p, q)).unwrap())
            .collect();
        let rec = reconstruct(&sys, &obj, 6, &exps, &mut Budget::new(1_000_000)).unwrap().unwrap();
        let dh: i64 = rec.annular.iter().map(|f| f.sum()).sum();
        assert_eq!(dh, 96);
    }
}
