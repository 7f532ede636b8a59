//! Semifree DG modules on a finite graded basis.
//!
//! The degree-`n` piece of a module with basis `e_0, e_1, ...` (degrees
//! ascending) is `⊕_k A_{n-|e_k|} e_k`, blocks in basis order. The differential
//! of each basis element is a list of terms `λ a_t e_j` where `a_t` is a basis
//! element of `A_{|e_k| - 1 - |e_j|}`.

use std::ops::Range;
use std::sync::{Arc, OnceLock};

use crate::complex::{DGComplex, TensorLayout};
use crate::dg::{DGAlgebra, DGModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{collect_sparse, Matrix, SparseVec};

/// `coeff * a_alg * e_gen`, with `a_alg` a basis element of the degree forced by the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<E> {
    pub gen: usize,
    pub alg: usize,
    pub coeff: E,
}

#[derive(Debug)]
struct Layout {
    lo: i64,
    /// per degree: first generator in range and block offsets (one more than the block count)
    degrees: Vec<(usize, Vec<usize>)>,
}

impl Layout {
    fn build(alg_dims: &[usize], gens: &[i64]) -> Self {
        let top = alg_dims.len() as i64 - 1;
        if gens.is_empty() || top < 0 {
            return Layout { lo: 0, degrees: Vec::new() };
        }
        let lo = gens[0];
        let hi = gens[gens.len() - 1] + top;
        let mut degrees = Vec::with_capacity((hi - lo + 1) as usize);
        for n in lo..=hi {
            let first = gens.partition_point(|&d| d < n - top);
            let last = gens.partition_point(|&d| d <= n);
            let mut offsets = Vec::with_capacity(last - first + 1);
            let mut acc = 0;
            offsets.push(0);
            for &d in &gens[first..last] {
                acc += alg_dims[(n - d) as usize];
                offsets.push(acc);
            }
            degrees.push((first, offsets));
        }
        Layout { lo, degrees }
    }

    fn slot(&self, n: i64) -> Option<&(usize, Vec<usize>)> {
        let k = n - self.lo;
        if k < 0 {
            return None;
        }
        self.degrees.get(k as usize)
    }

    fn dim(&self, n: i64) -> usize {
        self.slot(n).map_or(0, |(_, o)| *o.last().unwrap())
    }

    fn gens(&self, n: i64) -> Range<usize> {
        self.slot(n).map_or(0..0, |(f, o)| *f..*f + o.len() - 1)
    }

    fn index(&self, n: i64, gen: usize, a: usize) -> usize {
        let (first, offsets) = self.slot(n).expect("degree in range");
        offsets[gen - first] + a
    }

    fn locate(&self, n: i64, idx: usize) -> (usize, usize) {
        let (first, offsets) = self.slot(n).expect("degree in range");
        let b = offsets.partition_point(|&o| o <= idx) - 1;
        (first + b, idx - offsets[b])
    }
}

/// A semifree module over `A` with an explicit, degree-sorted basis.
#[derive(Clone, Debug)]
pub struct SemifreeModule<F: Field> {
    algebra: Arc<DGAlgebra<F>>,
    degrees: Vec<i64>,
    diffs: Vec<Vec<Term<F::Elem>>>,
    layout: Arc<OnceLock<Layout>>,
    module: Arc<OnceLock<DGModule<F>>>,
}

impl<F: Field> PartialEq for SemifreeModule<F> {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.degrees == other.degrees && self.diffs == other.diffs
    }
}

impl<F: Field> SemifreeModule<F> {
    /// Basis degrees must be ascending; term indices must be in range. The
    /// filtration condition is checked by [`SemifreeModule::filtration_defect`].
    pub fn new(algebra: Arc<DGAlgebra<F>>, degrees: Vec<i64>, diffs: Vec<Vec<Term<F::Elem>>>) -> Result<Self> {
        if degrees.len() != diffs.len() {
            return Err(Error::InvalidStructure("one differential per basis element".into()));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidStructure("basis degrees must be ascending".into()));
        }
        for terms in &diffs {
            if terms.iter().any(|t| t.gen >= degrees.len()) {
                return Err(Error::InvalidStructure("differential term refers to a missing basis element".into()));
            }
        }
        Ok(SemifreeModule { algebra, degrees, diffs, layout: Arc::default(), module: Arc::default() })
    }

    /// A complex over the ground field, viewed as a semifree module over an
    /// algebra with `A = A_0 = k`, one basis element per basis vector.
    pub fn over_field(algebra: Arc<DGAlgebra<F>>, complex: &DGComplex<F>) -> Result<Self> {
        let f = algebra.field().clone();
        if algebra.complex().dims() != [1] {
            return Err(Error::Precondition("algebra is not the ground field".into()));
        }
        let u = algebra.unit().first().map(|(_, u)| f.inv(u)).flatten().ok_or_else(|| Error::InvalidStructure("zero unit".into()))?;
        let mut degrees = Vec::new();
        let mut diffs = Vec::new();
        let mut start = 0;
        let mut prev_start = 0;
        for n in complex.lo()..=complex.hi() {
            let d = complex.d(n);
            for c in 0..complex.dim(n) {
                degrees.push(n);
                diffs.push(d.column(c).iter().map(|(r, x)| Term { gen: prev_start + r, alg: 0, coeff: f.mul(x, &u) }).collect());
            }
            prev_start = start;
            start += complex.dim(n);
        }
        Self::new(algebra, degrees, diffs)
    }

    /// The free module `A` on one generator of degree 0.
    pub fn free_rank_one(algebra: Arc<DGAlgebra<F>>) -> Self {
        Self::new(algebra, vec![0], vec![vec![]]).unwrap()
    }

    pub fn empty(algebra: Arc<DGAlgebra<F>>) -> Self {
        Self::new(algebra, vec![], vec![]).unwrap()
    }

    pub fn algebra(&self) -> &Arc<DGAlgebra<F>> {
        &self.algebra
    }
    pub fn field(&self) -> &F {
        self.algebra.field()
    }
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }
    pub fn degree(&self, k: usize) -> i64 {
        self.degrees[k]
    }
    pub fn diff(&self, k: usize) -> &[Term<F::Elem>] {
        &self.diffs[k]
    }

    /// Degree of the algebra coefficient in term `t` of `∂e_k`.
    pub fn term_degree(&self, k: usize, t: &Term<F::Elem>) -> i64 {
        self.degrees[k] - 1 - self.degrees[t.gen]
    }

    /// First `(basis element, term)` violating `∂e_k ∈ Σ_{|e_j| < |e_k|} A e_j`.
    pub fn filtration_defect(&self) -> Option<(usize, usize)> {
        for (k, terms) in self.diffs.iter().enumerate() {
            for (t_idx, t) in terms.iter().enumerate() {
                let s = self.term_degree(k, t);
                if self.degrees[t.gen] >= self.degrees[k] || s < 0 || t.alg >= self.algebra.dim(s) {
                    return Some((k, t_idx));
                }
            }
        }
        None
    }

    fn layout(&self) -> &Layout {
        self.layout.get_or_init(|| Layout::build(self.algebra.complex().dims(), &self.degrees))
    }

    /// Basis elements contributing to degree `n`.
    pub fn gens_in(&self, n: i64) -> Range<usize> {
        self.layout().gens(n)
    }

    pub fn dim(&self, n: i64) -> usize {
        self.layout().dim(n)
    }

    /// Index of `a e_gen` in degree `n`, `a` a basis element of `A_{n-|e_gen|}`.
    pub fn index(&self, n: i64, gen: usize, a: usize) -> usize {
        self.layout().index(n, gen, a)
    }

    /// Inverse of [`SemifreeModule::index`].
    pub fn locate(&self, n: i64, idx: usize) -> (usize, usize) {
        self.layout().locate(n, idx)
    }

    /// Lowest and highest degree of the underlying complex.
    pub fn support(&self) -> Option<(i64, i64)> {
        let l = self.layout();
        (!l.degrees.is_empty()).then(|| (l.lo, l.lo + l.degrees.len() as i64 - 1))
    }

    /// `∂e_k` in coordinates of degree `|e_k| - 1`.
    pub fn d_vector(&self, k: usize) -> SparseVec<F::Elem> {
        let n = self.degrees[k] - 1;
        let entries = self.diffs[k].iter().map(|t| (self.index(n, t.gen, t.alg), t.coeff.clone())).collect();
        collect_sparse(self.field(), entries)
    }

    /// Terms of a vector of degree `|e_k| - 1`, the inverse of [`SemifreeModule::d_vector`].
    pub fn terms_of(&self, n: i64, v: &SparseVec<F::Elem>) -> Vec<Term<F::Elem>> {
        v.iter()
            .map(|(idx, c)| {
                let (gen, alg) = self.locate(n, *idx);
                Term { gen, alg, coeff: c.clone() }
            })
            .collect()
    }

    /// The differential `degree n -> n - 1`.
    pub fn d_matrix(&self, n: i64) -> Matrix<F> {
        let a = &*self.algebra;
        let f = self.field();
        let mut cols = Vec::with_capacity(self.dim(n));
        for k in self.gens_in(n) {
            let i = n - self.degrees[k];
            let da = a.complex().d(i);
            for x in 0..a.dim(i) {
                let mut col = Vec::new();
                for (b, c) in da.column(x) {
                    col.push((self.index(n - 1, k, *b), c.clone()));
                }
                let odd = i.rem_euclid(2) == 1;
                for t in &self.diffs[k] {
                    let s = self.term_degree(k, t);
                    let prod = a.left(i as usize, x, s);
                    for (c, mu) in prod.column(t.alg) {
                        col.push((self.index(n - 1, t.gen, *c), f.signed(odd, f.mul(&t.coeff, mu))));
                    }
                }
                cols.push(col);
            }
        }
        Matrix::from_columns(f, self.dim(n - 1), cols)
    }

    /// Action of basis `b` of `A_q` on degree `n`.
    pub fn action_matrix(&self, q: usize, b: usize, n: i64) -> Matrix<F> {
        let a = &*self.algebra;
        let f = self.field();
        let mut cols = Vec::with_capacity(self.dim(n));
        for k in self.gens_in(n) {
            let i = n - self.degrees[k];
            let prod = a.left(q, b, i);
            for x in 0..a.dim(i) {
                let col = prod.column(x).iter().map(|(c, v)| (self.index(n + q as i64, k, *c), v.clone())).collect();
                cols.push(col);
            }
        }
        Matrix::from_columns(f, self.dim(n + q as i64), cols)
    }

    /// The underlying DG module; requires the filtration condition.
    pub fn module(&self) -> &DGModule<F> {
        self.module.get_or_init(|| {
            assert!(self.filtration_defect().is_none(), "semifree basis violates the filtration condition");
            let f = self.field();
            let cx = match self.support() {
                None => DGComplex::zero(f),
                Some((lo, hi)) => {
                    let dims = (lo..=hi).map(|n| self.dim(n)).collect();
                    DGComplex::from_fn(f, lo, dims, |n| if n == lo { Matrix::zero(f, 0, self.dim(n)) } else { self.d_matrix(n) }).unwrap()
                }
            };
            let me = self.clone_shallow();
            DGModule::new_lazy(self.algebra.clone(), cx, Arc::new(move |q, b, n| me.action_matrix(q, b, n))).unwrap()
        })
    }

    fn clone_shallow(&self) -> Self {
        SemifreeModule {
            algebra: self.algebra.clone(),
            degrees: self.degrees.clone(),
            diffs: self.diffs.clone(),
            layout: self.layout.clone(),
            module: Arc::default(),
        }
    }

    /// Keeps basis elements of degree `<= d`.
    pub fn truncate(&self, d: i64) -> Self {
        let keep = self.degrees.partition_point(|&x| x <= d);
        Self::new(self.algebra.clone(), self.degrees[..keep].to_vec(), self.diffs[..keep].to_vec()).unwrap()
    }

    /// `Σⁿ P` on the basis `σe_k`: `∂σe = (-1)ⁿ σ∂e` and `a σx = (-1)^{n|a|} σ(ax)`.
    pub fn shift(&self, n: i64) -> Self {
        let f = self.field();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, terms)| {
                terms
                    .iter()
                    .map(|t| {
                        let s = self.term_degree(k, t);
                        Term { gen: t.gen, alg: t.alg, coeff: f.signed((n + n * s).rem_euclid(2) == 1, t.coeff.clone()) }
                    })
                    .collect()
            })
            .collect();
        Self::new(self.algebra.clone(), self.degrees.iter().map(|d| d + n).collect(), diffs).unwrap()
    }

    /// Generators sorted by degree with differentials reindexed accordingly.
    fn from_unsorted(algebra: Arc<DGAlgebra<F>>, degrees: Vec<i64>, diffs: Vec<Vec<Term<F::Elem>>>) -> (Self, Vec<usize>) {
        let mut order: Vec<usize> = (0..degrees.len()).collect();
        order.sort_by_key(|&k| degrees[k]);
        let mut position = vec![0; degrees.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let degrees2 = order.iter().map(|&k| degrees[k]).collect();
        let diffs2 = order
            .iter()
            .map(|&k| {
                let mut ts: Vec<Term<F::Elem>> =
                    diffs[k].iter().map(|t| Term { gen: position[t.gen], alg: t.alg, coeff: t.coeff.clone() }).collect();
                ts.sort_by_key(|t| (t.gen, t.alg));
                ts
            })
            .collect();
        (Self::new(algebra, degrees2, diffs2).unwrap(), position)
    }
}

/// `P' ⊗_k P''` over `A' ⊗_k A''` with basis `e' ⊗ e''`.
///
/// `algebra` must be the tensor algebra of the two base algebras. Returns the
/// module and, for each pair `(k', k'')`, the position of `e'_{k'} ⊗ e''_{k''}`.
pub fn tensor_semifree<F: Field>(
    algebra: Arc<DGAlgebra<F>>,
    p1: &SemifreeModule<F>,
    p2: &SemifreeModule<F>,
) -> (SemifreeModule<F>, Vec<Vec<usize>>) {
    tensor_semifree_upto(algebra, p1, p2, i64::MAX)
}

/// As [`tensor_semifree`], keeping only basis pairs of total degree `<= top`;
/// dropped pairs get position `usize::MAX`.
pub fn tensor_semifree_upto<F: Field>(
    algebra: Arc<DGAlgebra<F>>,
    p1: &SemifreeModule<F>,
    p2: &SemifreeModule<F>,
    top: i64,
) -> (SemifreeModule<F>, Vec<Vec<usize>>) {
    let (a1, a2) = (p1.algebra(), p2.algebra());
    let f = p1.field();
    let lay = TensorLayout::new(0, a1.complex().dims(), 0, a2.complex().dims());
    let (r1, r2) = (p1.rank(), p2.rank());
    let mut kept = vec![usize::MAX; r1 * r2];
    let mut pairs = Vec::new();
    for k1 in 0..r1 {
        for k2 in 0..r2 {
            if p1.degree(k1).saturating_add(p2.degree(k2)) <= top {
                kept[k1 * r2 + k2] = pairs.len();
                pairs.push((k1, k2));
            }
        }
    }
    let pair = |k1: usize, k2: usize| kept[k1 * r2 + k2];
    let mut degrees = Vec::with_capacity(pairs.len());
    let mut diffs = Vec::with_capacity(pairs.len());
    for &(k1, k2) in &pairs {
        {
            degrees.push(p1.degree(k1) + p2.degree(k2));
            let mut terms: Vec<(usize, usize, F::Elem)> = Vec::new();
            for t in p1.diff(k1) {
                let s = p1.term_degree(k1, t);
                for (u, mu) in a2.unit() {
                    terms.push((pair(t.gen, k2), lay.index(s, t.alg, 0, *u), f.mul(&t.coeff, mu)));
                }
            }
            let e1 = p1.degree(k1);
            for t in p2.diff(k2) {
                let s = p2.term_degree(k2, t);
                let odd = (e1 + s * e1).rem_euclid(2) == 1;
                for (u, mu) in a1.unit() {
                    terms.push((pair(k1, t.gen), lay.index(0, *u, s, t.alg), f.signed(odd, f.mul(&t.coeff, mu))));
                }
            }
            terms.sort_by_key(|t| (t.0, t.1));
            let mut merged: Vec<Term<F::Elem>> = Vec::new();
            for (g, a, c) in terms {
                match merged.last_mut() {
                    Some(last) if last.gen == g && last.alg == a => last.coeff = f.add(&last.coeff, &c),
                    _ => merged.push(Term { gen: g, alg: a, coeff: c }),
                }
            }
            merged.retain(|t| !f.is_zero(&t.coeff));
            diffs.push(merged);
        }
    }
    let (m, position) = SemifreeModule::from_unsorted(algebra, degrees, diffs);
    let table = (0..r1)
        .map(|k1| (0..r2).map(|k2| if pair(k1, k2) == usize::MAX { usize::MAX } else { position[pair(k1, k2)] }).collect())
        .collect();
    (m, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_koszul, make_truncated_poly};
    use crate::complex::validate_complex;
    use crate::dg::validate_dg_module;
    use crate::field::PrimeField;

    #[test]
    fn free_module_matches_regular() {
        let f = PrimeField::new(101).unwrap();
        let t2 = make_truncated_poly(&f, 2).unwrap();
        let k = make_koszul(&t2, &vec![(1, 1)]).unwrap();
        let p = SemifreeModule::free_rank_one(k.algebra.clone());
        assert_eq!(p.module().complex(), k.algebra.complex());
        assert!(validate_dg_module(p.module()).is_holds());
    }

    #[test]
    fn periodic_ladder_is_a_complex() {
        // e_j in degree j with ∂e_j = x e_{j-1} over k[x]/(x²)
        let f = PrimeField::new(101).unwrap();
        let t2 = make_truncated_poly(&f, 2).unwrap();
        let diffs = (0..5).map(|j| if j == 0 { vec![] } else { vec![Term { gen: j - 1, alg: 1, coeff: 1 }] }).collect();
        let p = SemifreeModule::new(t2.algebra.clone(), (0..5).collect(), diffs).unwrap();
        assert!(p.filtration_defect().is_none());
        assert!(validate_complex(p.module().complex()).is_holds());
        assert!(validate_dg_module(p.module()).is_holds());
        let s = p.shift(1);
        assert!(validate_dg_module(s.module()).is_holds());
        assert_eq!(s.module().lo(), 1);
        assert_eq!(p.truncate(2).rank(), 3);
    }

    #[test]
    fn same_degree_term_breaks_filtration() {
        let f = PrimeField::new(101).unwrap();
        let t2 = make_truncated_poly(&f, 2).unwrap();
        let p = SemifreeModule::new(t2.algebra.clone(), vec![0, 0], vec![vec![], vec![Term { gen: 0, alg: 0, coeff: 1 }]]).unwrap();
        assert_eq!(p.filtration_defect(), Some((1, 0)));
    }
}
