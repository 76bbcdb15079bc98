//! Exterior derivatives, form Laplacians, Betti numbers, heat-kernel
//! supertraces and GF(2) chain calculus.
//!
//! Simplices are indexed in the lexicographic order of
//! [`SimplicialGraph::simplices`] and oriented by their ascending tuple.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use nalgebra::RealField;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{edge, Simplex, SimplicialGraph, VertexId};
use crate::linalg::{to_dmatrix, Matrix};
use crate::scalar::{Field, Gf2, Rational};

/// Coefficients indexed by the `k`-simplices of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainVector<T> {
    pub k: usize,
    pub coeffs: Vec<T>,
}

impl<T: Clone + Zero> ChainVector<T> {
    pub fn zeros(g: &SimplicialGraph, k: usize) -> Self {
        ChainVector { k, coeffs: vec![T::zero(); g.simplices(k).len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl ChainVector<Gf2> {
    /// Indicator chain of the given simplices.
    pub fn indicator<'a>(g: &SimplicialGraph, k: usize, support: impl IntoIterator<Item = &'a Simplex>) -> Result<Self> {
        let index = simplex_index(g, k);
        let mut c = ChainVector::zeros(g, k);
        for s in support {
            let i = *index.get(s).ok_or_else(|| Error::UnknownSimplex(s.clone()))?;
            c.coeffs[i] += Gf2::ONE;
        }
        Ok(c)
    }

    /// The simplices with coefficient one.
    pub fn support(&self, g: &SimplicialGraph) -> Vec<Simplex> {
        g.simplices(self.k)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| c.is_one())
            .map(|(s, _)| s.clone())
            .collect()
    }
}

/// Position of each `k`-simplex in the lexicographic order.
pub fn simplex_index(g: &SimplicialGraph, k: usize) -> HashMap<Simplex, usize> {
    g.simplices(k).iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
}

fn derivative_i64(g: &SimplicialGraph, k: usize) -> Matrix<i64> {
    let cols = g.simplices(k);
    let rows = g.simplices(k + 1);
    let index = simplex_index(g, k);
    let mut d = Matrix::zeros(rows.len(), cols.len());
    for (r, s) in rows.iter().enumerate() {
        for pos in 0..s.len() {
            let face: Simplex = s.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &v)| v).collect();
            d[(r, index[&face])] = if pos % 2 == 0 { 1 } else { -1 };
        }
    }
    d
}

/// `d_k: Ω_k → Ω_{k+1}`; row for each `(k+1)`-simplex, column for each
/// `k`-simplex, entry `(-1)^p` when the column is the row minus its `p`-th vertex.
pub fn exterior_derivative<T: Field>(g: &SimplicialGraph, k: usize) -> Matrix<T> {
    derivative_i64(g, k).map(|&v| T::from_i64(v))
}

fn laplacian_i64(g: &SimplicialGraph, k: usize) -> Matrix<i64> {
    let n = g.simplices(k).len();
    let mut l = Matrix::zeros(n, n);
    if k > 0 {
        let d = derivative_i64(g, k - 1);
        l = &l + &(&d * &d.transpose());
    }
    let d = derivative_i64(g, k);
    &l + &(&d.transpose() * &d)
}

/// `L_k = d_{k-1} d_{k-1}^T + d_k^T d_k`.
pub fn laplacian<T: Field>(g: &SimplicialGraph, k: usize) -> Matrix<T> {
    laplacian_i64(g, k).map(|&v| T::from_i64(v))
}

/// Nullities of the form Laplacians, by exact rational elimination.
pub fn betti_numbers(g: &SimplicialGraph) -> Vec<usize> {
    (0..=g.dimension().max(-1))
        .map(|k| laplacian::<Rational>(g, k as usize).nullity())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport<R> {
    pub k: usize,
    /// Descending.
    pub eigenvalues: Vec<R>,
    /// Exact nullity of `L_k`.
    pub betti: usize,
}

fn eigenvalues<R: RealField + Copy>(g: &SimplicialGraph, k: usize) -> Result<Vec<R>> {
    let l = laplacian_i64(g, k);
    if l.rows() == 0 {
        return Ok(Vec::new());
    }
    let m = to_dmatrix(&l, |&v| nalgebra::convert::<f64, R>(v as f64));
    let eps = nalgebra::convert::<f64, R>(1e-14);
    let eig = m
        .try_symmetric_eigen(eps, 100_000)
        .ok_or_else(|| Error::Spectral(format!("no convergence for L_{k}")))?;
    let mut vals: Vec<R> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok(vals)
}

/// Eigenvalues of `L_k`, floating, next to the exact Betti number.
pub fn spectrum<R: RealField + Copy>(g: &SimplicialGraph, k: usize, tol: R) -> Result<SpectralReport<R>> {
    let mut vals = eigenvalues::<R>(g, k)?;
    for v in &mut vals {
        if *v < -tol {
            return Err(Error::Spectral(format!("negative eigenvalue in L_{k}")));
        }
        if *v < R::zero() {
            *v = R::zero();
        }
    }
    let betti = laplacian::<Rational>(g, k).nullity();
    Ok(SpectralReport { k, eigenvalues: vals, betti })
}

/// `str(exp(-t L)) = Σ_k (-1)^k tr exp(-t L_k)`.
pub fn mckean_singer<R: RealField + Copy>(g: &SimplicialGraph, t: R) -> Result<R> {
    let mut total = R::zero();
    for k in 0..=g.dimension().max(-1) {
        let tr = eigenvalues::<R>(g, k as usize)?
            .into_iter()
            .fold(R::zero(), |acc, lambda| acc + (-(t * lambda)).exp());
        if k % 2 == 0 {
            total += tr;
        } else {
            total -= tr;
        }
    }
    Ok(total)
}

/// Exact orthogonal projection of a `k`-form onto the kernel of `L_k`,
/// the long-time limit of the heat flow.
pub fn harmonic_projection(g: &SimplicialGraph, form: &ChainVector<Rational>) -> Result<ChainVector<Rational>> {
    let n = g.simplices(form.k).len();
    if form.coeffs.len() != n {
        return Err(Error::InvalidArgument(format!("form has {} coefficients, expected {n}", form.coeffs.len())));
    }
    let basis = laplacian::<Rational>(g, form.k).kernel();
    if basis.is_empty() {
        return Ok(ChainVector::zeros(g, form.k));
    }
    let dot = |a: &[Rational], b: &[Rational]| a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| s + x * y);
    let gram = Matrix::from_fn(basis.len(), basis.len(), |i, j| dot(&basis[i], &basis[j]));
    let rhs: Vec<Rational> = basis.iter().map(|b| dot(b, &form.coeffs)).collect();
    let c = gram.solve(&rhs).expect("Gram matrix of a basis is invertible");
    let mut h = vec![Rational::zero(); n];
    for (coef, b) in c.iter().zip(&basis) {
        for (hi, bi) in h.iter_mut().zip(b) {
            *hi += coef * bi;
        }
    }
    Ok(ChainVector { k: form.k, coeffs: h })
}

/// Signed indicator 1-form of a closed walk `v_0, v_1, ..., v_n = v_0`.
pub fn loop_form(g: &SimplicialGraph, walk: &[VertexId]) -> Result<ChainVector<Rational>> {
    if walk.len() < 2 || walk.first() != walk.last() {
        return Err(Error::InvalidArgument("walk is not closed".into()));
    }
    let index = simplex_index(g, 1);
    let mut form = ChainVector::zeros(g, 1);
    for w in walk.windows(2) {
        let (a, b) = edge(w[0], w[1]);
        let i = *index.get(&vec![a, b]).ok_or(Error::UnknownEdge(a, b))?;
        let sign = if w[0] < w[1] { 1 } else { -1 };
        form.coeffs[i] += Rational::from_i64(sign);
    }
    Ok(form)
}

/// Harmonic representative of the class of a closed walk.
pub fn hurewicz(g: &SimplicialGraph, walk: &[VertexId]) -> Result<ChainVector<Rational>> {
    harmonic_projection(g, &loop_form(g, walk)?)
}

/// GF(2) boundary of a chain.
pub fn z2_boundary(g: &SimplicialGraph, c: &ChainVector<Gf2>) -> ChainVector<Gf2> {
    if c.k == 0 {
        return ChainVector { k: 0, coeffs: Vec::new() };
    }
    let index = simplex_index(g, c.k - 1);
    let mut out = ChainVector::zeros(g, c.k - 1);
    for (s, coef) in g.simplices(c.k).iter().zip(&c.coeffs) {
        if !coef.is_one() {
            continue;
        }
        for pos in 0..s.len() {
            let face: Simplex = s.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &v)| v).collect();
            out.coeffs[index[&face]] += Gf2::ONE;
        }
    }
    out
}

pub fn is_cycle(g: &SimplicialGraph, c: &ChainVector<Gf2>) -> bool {
    z2_boundary(g, c).is_zero()
}

fn in_subcomplex(s: &[VertexId], sub: &BTreeSet<VertexId>) -> bool {
    s.iter().all(|v| sub.contains(v))
}

/// Cycle condition relative to the subcomplex induced on `sub`: the
/// boundary may be nonzero only on simplices of that subcomplex.
pub fn is_relative_cycle(g: &SimplicialGraph, c: &ChainVector<Gf2>, sub: &BTreeSet<VertexId>) -> bool {
    let b = z2_boundary(g, c);
    if b.k + 1 != c.k {
        return true;
    }
    g.simplices(b.k).iter().zip(&b.coeffs).all(|(s, coef)| !coef.is_one() || in_subcomplex(s, sub))
}

#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceSolution {
    Surface(ChainVector<Gf2>),
    /// The cycle carries a nontrivial homology class.
    Unsolvable,
}

/// Find a 2-chain whose GF(2) boundary is the 1-cycle `o`.
pub fn solve_surface(g: &SimplicialGraph, o: &ChainVector<Gf2>) -> Result<SurfaceSolution> {
    solve_surface_relative(g, o, &BTreeSet::new())
}

/// As [`solve_surface`], but modulo the subcomplex induced on `sub`:
/// simplices lying in it are ignored on both sides.
pub fn solve_surface_relative(g: &SimplicialGraph, o: &ChainVector<Gf2>, sub: &BTreeSet<VertexId>) -> Result<SurfaceSolution> {
    if o.k != 1 {
        return Err(Error::InvalidArgument(format!("expected a 1-chain, found degree {}", o.k)));
    }
    if !is_relative_cycle(g, o, sub) {
        return Err(Error::NotACycle);
    }
    let edges = g.simplices(1);
    let rows: Vec<usize> = (0..edges.len()).filter(|&i| !in_subcomplex(&edges[i], sub)).collect();
    let row_of: HashMap<usize, usize> = rows.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let index = simplex_index(g, 1);
    let triangles = g.simplices(2);
    let mut columns = Vec::with_capacity(triangles.len());
    let mut col_source = Vec::with_capacity(triangles.len());
    for (t, tri) in triangles.iter().enumerate() {
        if in_subcomplex(tri, sub) {
            continue;
        }
        let mut col = Vec::new();
        for pos in 0..3 {
            let face: Simplex = tri.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &v)| v).collect();
            if let Some(&r) = row_of.get(&index[&face]) {
                col.push(r);
            }
        }
        columns.push(col);
        col_source.push(t);
    }
    let rhs: Vec<usize> = o
        .coeffs
        .iter()
        .enumerate()
        .filter(|(i, c)| c.is_one() && row_of.contains_key(i))
        .map(|(i, _)| row_of[&i])
        .collect();
    match gf2_solve(rows.len(), &columns, &rhs) {
        Some(sol) => {
            let mut s = ChainVector::zeros(g, 2);
            for c in sol {
                s.coeffs[col_source[c]] = Gf2::ONE;
            }
            Ok(SurfaceSolution::Surface(s))
        }
        None => Ok(SurfaceSolution::Unsolvable),
    }
}

#[derive(Clone)]
struct BitVec(Vec<u64>);

impl BitVec {
    fn new(n: usize) -> Self {
        BitVec(vec![0; n.div_ceil(64).max(1)])
    }
    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn xor(&mut self, o: &BitVec) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }
    fn lowest(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Solve `A x = b` over GF(2) where column `j` of `A` has ones at the rows
/// in `columns[j]`. Returns the support of one solution.
pub fn gf2_solve(rows: usize, columns: &[Vec<usize>], rhs: &[usize]) -> Option<Vec<usize>> {
    let ncols = columns.len();
    // Echelon basis keyed by lowest set row, each with the columns it combines.
    let mut basis: BTreeMap<usize, (BitVec, BitVec)> = BTreeMap::new();
    let reduce = |v: &mut BitVec, combo: &mut BitVec, basis: &BTreeMap<usize, (BitVec, BitVec)>| {
        while let Some(p) = v.lowest() {
            match basis.get(&p) {
                Some((bv, bc)) => {
                    v.xor(bv);
                    combo.xor(bc);
                }
                None => return Some(p),
            }
        }
        None
    };
    for (j, col) in columns.iter().enumerate() {
        let mut v = BitVec::new(rows);
        for &r in col {
            v.flip(r);
        }
        let mut combo = BitVec::new(ncols);
        combo.flip(j);
        if let Some(p) = reduce(&mut v, &mut combo, &basis) {
            basis.insert(p, (v, combo));
        }
    }
    let mut target = BitVec::new(rows);
    for &r in rhs {
        target.flip(r);
    }
    let mut combo = BitVec::new(ncols);
    if reduce(&mut target, &mut combo, &basis).is_some() {
        return None;
    }
    Some((0..ncols).filter(|&j| combo.get(j)).collect())
}

/// For a closed 2-dimensional graph: can the triangles be signed so that
/// every edge receives opposite orientations from its two triangles?
pub fn is_orientable(g: &SimplicialGraph) -> bool {
    let tris = g.simplices(2);
    let mut by_edge: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
    for (t, s) in tris.iter().enumerate() {
        for (a, b) in [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])] {
            by_edge.entry((a, b)).or_default().push(t);
        }
    }
    // Sign of edge (a, b) inside the ascending triangle: + for positions (0,1)
    // and (1,2), - for (0,2).
    let induced = |t: usize, a: VertexId, b: VertexId| -> i8 {
        let s = &tris[t];
        if (s[0], s[2]) == (a, b) {
            -1
        } else {
            1
        }
    };
    let mut sign: Vec<i8> = vec![0; tris.len()];
    for start in 0..tris.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            let s = tris[t].clone();
            for (a, b) in [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])] {
                for &u in &by_edge[&(a, b)] {
                    if u == t {
                        continue;
                    }
                    let want = -sign[t] * induced(t, a, b) * induced(u, a, b);
                    if sign[u] == 0 {
                        sign[u] = want;
                        queue.push_back(u);
                    } else if sign[u] != want {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Dense row-major text with exact entries `p/q`, one row per line.
pub fn matrix_text(m: &Matrix<Rational>) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|v| format!("{}/{}", v.numer(), v.denom())).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
