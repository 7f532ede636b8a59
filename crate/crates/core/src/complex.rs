//! Bounded chain complexes of finite-dimensional vector spaces.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::verdict::{TrustWindow, Verdict, VerdictReport};

/// A homologically graded complex supported on `[lo, lo + dims.len() - 1]`.
///
/// `diffs[k]` is the differential out of degree `lo + k`; the one out of the
/// lowest degree has zero rows.
#[derive(Clone, Debug)]
pub struct DGComplex<F: Field> {
    field: F,
    lo: i64,
    dims: Vec<usize>,
    diffs: Arc<Vec<Matrix<F>>>,
    ranks: Arc<Vec<OnceLock<usize>>>,
}

impl<F: Field> PartialEq for DGComplex<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.lo == other.lo && self.dims == other.dims && self.diffs == other.diffs
    }
}

impl<F: Field> DGComplex<F> {
    pub fn new(field: &F, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != diffs.len() {
            return Err(Error::InvalidComplex(format!("{} degrees but {} differentials", dims.len(), diffs.len())));
        }
        for (k, d) in diffs.iter().enumerate() {
            let rows = if k == 0 { 0 } else { dims[k - 1] };
            if d.rows() != rows || d.cols() != dims[k] {
                return Err(Error::InvalidComplex(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    lo + k as i64,
                    d.rows(),
                    d.cols(),
                    rows,
                    dims[k]
                )));
            }
            if d.field() != field {
                return Err(Error::FieldMismatch(field.spec(), d.field().spec()));
            }
        }
        let ranks = (0..dims.len()).map(|_| OnceLock::new()).collect();
        Ok(DGComplex { field: field.clone(), lo, dims, diffs: Arc::new(diffs), ranks: Arc::new(ranks) })
    }

    /// Builds a complex on `[lo, hi]` from a differential callback.
    pub fn from_fn(field: &F, lo: i64, dims: Vec<usize>, mut diff: impl FnMut(i64) -> Matrix<F>) -> Result<Self> {
        let diffs = (0..dims.len()).map(|k| diff(lo + k as i64)).collect();
        Self::new(field, lo, dims, diffs)
    }

    pub fn zero(field: &F) -> Self {
        Self::new(field, 0, Vec::new(), Vec::new()).unwrap()
    }

    /// `k^dim` in a single degree.
    pub fn concentrated(field: &F, degree: i64, dim: usize) -> Self {
        Self::new(field, degree, vec![dim], vec![Matrix::zero(field, 0, dim)]).unwrap()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top of the support; `lo - 1` when there are no degrees.
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: i64) -> usize {
        self.slot(n).map_or(0, |k| self.dims[k])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let k = n - self.lo;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    /// The differential `degree n -> degree n-1`.
    pub fn d(&self, n: i64) -> Cow<'_, Matrix<F>> {
        match self.slot(n) {
            Some(k) if k > 0 => Cow::Borrowed(&self.diffs[k]),
            _ => Cow::Owned(Matrix::zero(&self.field, self.dim(n - 1), self.dim(n))),
        }
    }

    /// Rank of `d(n)`, cached.
    pub fn rank_d(&self, n: i64) -> usize {
        match self.slot(n) {
            Some(k) if k > 0 => *self.ranks[k].get_or_init(|| self.diffs[k].rank()),
            _ => 0,
        }
    }

    pub fn homology_dim(&self, n: i64) -> usize {
        self.dim(n) - self.rank_d(n) - self.rank_d(n + 1)
    }

    /// Homology dimensions over the support.
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        (self.lo..=self.hi()).map(|n| (n, self.homology_dim(n))).collect()
    }

    /// Lowest and highest degree with nonzero homology.
    pub fn homology_bounds(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = (self.lo..=self.hi()).filter(|&n| self.homology_dim(n) > 0).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// Drops zero-dimensional degrees at both ends.
    pub fn trimmed(&self) -> Self {
        let first = self.dims.iter().position(|&d| d > 0);
        let Some(first) = first else { return Self::zero(&self.field) };
        let last = self.dims.iter().rposition(|&d| d > 0).unwrap();
        if first == 0 && last + 1 == self.dims.len() {
            return self.clone();
        }
        let lo = self.lo + first as i64;
        let dims = self.dims[first..=last].to_vec();
        Self::from_fn(&self.field, lo, dims, |n| if n == lo { Matrix::zero(&self.field, 0, self.dim(n)) } else { self.d(n).into_owned() })
            .unwrap()
    }

    /// Copy with entry `(row, col)` of the differential out of degree `n` replaced.
    pub fn with_entry(&self, n: i64, row: usize, col: usize, value: F::Elem) -> Self {
        let k = self.slot(n).expect("degree in support");
        let mut diffs = (*self.diffs).clone();
        let mut cols = diffs[k].columns().to_vec();
        cols[col].retain(|e| e.0 != row);
        cols[col].push((row, value));
        diffs[k] = Matrix::from_columns(&self.field, diffs[k].rows(), cols);
        Self::new(&self.field, self.lo, self.dims.clone(), diffs).unwrap()
    }

    /// Re-indexes onto `[lo, hi]`, padding with zero spaces; degrees outside must vanish.
    pub fn with_support(&self, lo: i64, hi: i64) -> Self {
        debug_assert!((self.lo..=self.hi()).all(|n| (lo..=hi).contains(&n) || self.dim(n) == 0));
        let dims = (lo..=hi).map(|n| self.dim(n)).collect();
        Self::from_fn(&self.field, lo, dims, |n| if n == lo { Matrix::zero(&self.field, 0, self.dim(n)) } else { self.d(n).into_owned() })
            .unwrap()
    }
}

/// `d(n-1) d(n) = 0` in every degree.
pub fn validate_complex<F: Field>(x: &DGComplex<F>) -> VerdictReport {
    for n in (x.lo() + 2)..=x.hi() {
        let comp = x.d(n - 1).mul(&x.d(n)).expect("shapes agree");
        if !comp.is_zero() {
            return VerdictReport::fails("validate_complex", format!("d∘d is nonzero out of degree {n}")).with_param("degree", n);
        }
    }
    VerdictReport::holds("validate_complex")
}

/// Shift: `(Σⁿx)_i = x_{i-n}` with differential `(-1)ⁿ d`.
pub fn shift<F: Field>(x: &DGComplex<F>, n: i64) -> DGComplex<F> {
    let sign = x.field().sign(n);
    let diffs = x.diffs.iter().map(|d| d.scaled(&sign)).collect();
    DGComplex::new(x.field(), x.lo() + n, x.dims.clone(), diffs).unwrap()
}

/// Homology in a single degree: cycles, boundaries, representatives and a projector.
#[derive(Clone, Debug)]
pub struct HomologyDegree<F: Field> {
    pub degree: i64,
    pub dim: usize,
    /// Reduced-echelon basis of the cycles.
    pub cycles: Matrix<F>,
    /// Reduced-echelon basis of the boundaries.
    pub boundaries: Matrix<F>,
    /// Cycles whose classes form the homology basis.
    pub reps: Matrix<F>,
    projector: Echelon<F>,
}

impl<F: Field> HomologyDegree<F> {
    pub fn compute(x: &DGComplex<F>, n: i64) -> Self {
        let field = x.field().clone();
        let cycles = x.d(n).kernel_basis();
        let boundaries = x.d(n + 1).image_basis();
        let mut projector = Echelon::new(field.clone(), x.dim(n));
        for b in boundaries.columns() {
            projector.insert(b.clone());
        }
        let mut reps = Vec::new();
        for z in cycles.columns() {
            if projector.insert_tagged(z.clone(), vec![(reps.len(), field.one())]).is_ok() {
                reps.push(z.clone());
            }
        }
        let dim = reps.len();
        HomologyDegree { degree: n, dim, cycles, boundaries, reps: Matrix::from_columns(&field, x.dim(n), reps), projector }
    }

    /// Coordinates of the class of `z` in the representative basis; `None` if `z` is not a cycle.
    pub fn project(&self, z: &SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
        let (rest, tag) = self.projector.reduce_leading(z.clone(), Vec::new());
        if !rest.is_empty() {
            return None;
        }
        let f = self.reps.field();
        let minus = f.neg(&f.one());
        Some(crate::linalg::scale(f, &tag, &minus))
    }

    /// Whether the cycle `z` is a boundary.
    pub fn is_boundary(&self, z: &SparseVec<F::Elem>) -> bool {
        matches!(self.project(z), Some(v) if v.is_empty())
    }
}

/// Homology in every degree of the support.
#[derive(Clone, Debug)]
pub struct HomologyData<F: Field> {
    pub degrees: BTreeMap<i64, HomologyDegree<F>>,
}

impl<F: Field> HomologyData<F> {
    pub fn dim(&self, n: i64) -> usize {
        self.degrees.get(&n).map_or(0, |h| h.dim)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().map(|(n, h)| (*n, h.dim)).collect()
    }
}

pub fn homology<F: Field>(x: &DGComplex<F>) -> Result<HomologyData<F>> {
    let v = validate_complex(x);
    if !v.is_holds() {
        return Err(Error::InvalidComplex(v.reason.unwrap_or_default()));
    }
    let degrees = (x.lo()..=x.hi()).map(|n| (n, HomologyDegree::compute(x, n))).collect();
    Ok(HomologyData { degrees })
}

/// A map of complexes of degree `degree`; `comps[k]` acts on source degree `source.lo() + k`.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    source: DGComplex<F>,
    target: DGComplex<F>,
    degree: i64,
    comps: Vec<Matrix<F>>,
}

impl<F: Field> ChainMap<F> {
    pub fn new(source: DGComplex<F>, target: DGComplex<F>, degree: i64, comps: Vec<Matrix<F>>) -> Result<Self> {
        if comps.len() != source.dims().len() {
            return Err(Error::Dimension(format!("{} components for {} source degrees", comps.len(), source.dims().len())));
        }
        for (k, c) in comps.iter().enumerate() {
            let n = source.lo() + k as i64;
            if c.cols() != source.dim(n) || c.rows() != target.dim(n + degree) {
                return Err(Error::Dimension(format!(
                    "component at degree {n} is {}x{}, expected {}x{}",
                    c.rows(),
                    c.cols(),
                    target.dim(n + degree),
                    source.dim(n)
                )));
            }
        }
        Ok(ChainMap { source, target, degree, comps })
    }

    pub fn from_fn(source: DGComplex<F>, target: DGComplex<F>, degree: i64, mut f: impl FnMut(i64) -> Matrix<F>) -> Result<Self> {
        let comps = (source.lo()..=source.hi()).map(&mut f).collect();
        Self::new(source, target, degree, comps)
    }

    pub fn identity(x: &DGComplex<F>) -> Self {
        let comps = x.dims().iter().map(|&d| Matrix::identity(x.field(), d)).collect();
        ChainMap { source: x.clone(), target: x.clone(), degree: 0, comps }
    }

    pub fn zero(source: &DGComplex<F>, target: &DGComplex<F>, degree: i64) -> Self {
        Self::from_fn(source.clone(), target.clone(), degree, |n| Matrix::zero(source.field(), target.dim(n + degree), source.dim(n)))
            .unwrap()
    }

    pub fn source(&self) -> &DGComplex<F> {
        &self.source
    }
    pub fn target(&self) -> &DGComplex<F> {
        &self.target
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn component(&self, n: i64) -> Cow<'_, Matrix<F>> {
        let k = n - self.source.lo();
        if k >= 0 && (k as usize) < self.comps.len() {
            Cow::Borrowed(&self.comps[k as usize])
        } else {
            Cow::Owned(Matrix::zero(self.source.field(), self.target.dim(n + self.degree), self.source.dim(n)))
        }
    }

    /// First source degree where `d f = (-1)^deg f d` fails.
    pub fn chain_defect(&self) -> Option<i64> {
        let sign = self.source.field().sign(self.degree);
        for n in self.source.lo()..=self.source.hi() + 1 {
            let lhs = self.target.d(n + self.degree).mul(&self.component(n)).unwrap();
            let rhs = self.component(n - 1).mul(&self.source.d(n)).unwrap().scaled(&sign);
            if lhs != rhs {
                return Some(n);
            }
        }
        None
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_defect().is_none()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap<F>) -> Result<ChainMap<F>> {
        if other.source.dims() != self.target.dims() || other.source.lo() != self.target.lo() && !self.target.is_zero() {
            return Err(Error::Dimension("composed maps do not share a complex".into()));
        }
        let deg = self.degree;
        ChainMap::from_fn(self.source.clone(), other.target.clone(), deg + other.degree, |n| {
            other.component(n + deg).mul(&self.component(n)).unwrap()
        })
    }

    /// Multiplies every component by a scalar.
    pub fn scaled(&self, c: &F::Elem) -> ChainMap<F> {
        let comps = self.comps.iter().map(|m| m.scaled(c)).collect();
        ChainMap { comps, ..self.clone() }
    }

    /// `H_n(f)` in the representative bases of [`HomologyDegree`].
    pub fn induced(&self, n: i64) -> Matrix<F> {
        let hs = HomologyDegree::compute(&self.source, n);
        let ht = HomologyDegree::compute(&self.target, n + self.degree);
        let comp = self.component(n);
        let cols = hs.reps.columns().iter().map(|z| ht.project(&comp.mul_vec(z)).expect("chain maps send cycles to cycles")).collect();
        Matrix::from_columns(self.source.field(), ht.dim, cols)
    }
}

fn dims_table(x: &DGComplex<impl Field>, degrees: impl Iterator<Item = i64>) -> BTreeMap<i64, i64> {
    degrees.map(|n| (n, x.homology_dim(n) as i64)).collect()
}

/// Whether `H(f)` is bijective in every degree.
pub fn is_quasi_iso<F: Field>(f: &ChainMap<F>) -> Result<VerdictReport> {
    is_quasi_iso_on(f, &TrustWindow::ALL)
}

/// Whether `H_n(f)` is bijective for every source degree `n` in `window`.
pub fn is_quasi_iso_on<F: Field>(f: &ChainMap<F>, window: &TrustWindow) -> Result<VerdictReport> {
    if let Some(n) = f.chain_defect() {
        return Err(Error::Precondition(format!("not a chain map at degree {n}")));
    }
    let (s, t, deg) = (f.source(), f.target(), f.degree());
    let lo = s.lo().min(t.lo() - deg);
    let hi = s.hi().max(t.hi() - deg);
    let degrees = window.clamp(lo, hi);
    let mut report = VerdictReport::new("is_quasi_iso", Verdict::Holds, *window)
        .with_table("source homology", dims_table(s, degrees.clone()))
        .with_table("target homology", degrees.clone().map(|n| (n, t.homology_dim(n + deg) as i64)).collect());
    for n in degrees {
        let (hs, ht) = (s.homology_dim(n), t.homology_dim(n + deg));
        if hs == 0 && ht == 0 {
            continue;
        }
        if hs != ht {
            report.verdict = Verdict::Fails;
            report.reason = Some(format!("homology dimensions differ at degree {n}: {hs} vs {ht}"));
            return Ok(report.with_param("degree", n));
        }
        let hsrc = HomologyDegree::compute(s, n);
        let htgt = HomologyDegree::compute(t, n + deg);
        let comp = f.component(n);
        let cols: Vec<SparseVec<F::Elem>> =
            hsrc.reps.columns().iter().map(|z| htgt.project(&comp.mul_vec(z)).expect("chain maps send cycles to cycles")).collect();
        let induced = Matrix::from_columns(s.field(), ht, cols);
        if induced.rank() != hs {
            report.verdict = Verdict::Fails;
            report.reason = Some(format!("induced map on homology is singular at degree {n}"));
            return Ok(report.with_param("degree", n));
        }
    }
    Ok(report)
}

/// `τ_{≥n}`: degrees above `n` unchanged, cycles in degree `n`, zero below.
pub fn soft_truncate_below<F: Field>(x: &DGComplex<F>, n: i64) -> (DGComplex<F>, ChainMap<F>) {
    if n <= x.lo() {
        return (x.clone(), ChainMap::identity(x));
    }
    if n > x.hi() {
        let z = DGComplex::zero(x.field());
        return (z.clone(), ChainMap::zero(&z, x, 0));
    }
    let (kernel, free) = x.d(n).kernel_with_free();
    let field = x.field();
    let dims: Vec<usize> = std::iter::once(free.len()).chain((n + 1..=x.hi()).map(|m| x.dim(m))).collect();
    let t = DGComplex::from_fn(field, n, dims, |m| {
        if m == n {
            Matrix::zero(field, 0, free.len())
        } else if m == n + 1 {
            x.d(m).select_rows(&free)
        } else {
            x.d(m).into_owned()
        }
    })
    .unwrap();
    let incl = ChainMap::from_fn(t.clone(), x.clone(), 0, |m| if m == n { kernel.clone() } else { Matrix::identity(field, x.dim(m)) }).unwrap();
    (t, incl)
}

/// Quotient data for `X_t / B_t`: basis = non-pivot coordinates after reduction by the boundaries.
pub(crate) struct Quotient<F: Field> {
    pub keep: Vec<usize>,
    echelon: Echelon<F>,
    position: Vec<usize>,
}

impl<F: Field> Quotient<F> {
    pub fn new(field: &F, dim: usize, relations: impl IntoIterator<Item = SparseVec<F::Elem>>) -> Self {
        let mut echelon = Echelon::new(field.clone(), dim);
        for r in relations {
            echelon.insert(r);
        }
        let keep: Vec<usize> = (0..dim).filter(|&i| !echelon.is_pivot(i)).collect();
        let mut position = vec![usize::MAX; dim];
        for (k, &i) in keep.iter().enumerate() {
            position[i] = k;
        }
        Quotient { keep, echelon, position }
    }

    pub fn dim(&self) -> usize {
        self.keep.len()
    }

    /// Coordinates of the class of `v`.
    pub fn project(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let (r, _) = self.echelon.reduce_full(v.clone(), Vec::new());
        r.into_iter().map(|(i, x)| (self.position[i], x)).collect()
    }

    /// Matrix of the projection from the ambient space.
    pub fn projection(&self, field: &F) -> Matrix<F> {
        let cols = (0..self.position.len()).map(|i| self.project(&vec![(i, field.one())])).collect();
        Matrix::from_columns(field, self.dim(), cols)
    }
}

/// `τ_{≤t}`: degrees below `t` unchanged, `X_t / B_t` in degree `t`, zero above.
pub fn quotient_truncate_above<F: Field>(x: &DGComplex<F>, t: i64) -> (DGComplex<F>, ChainMap<F>) {
    if t >= x.hi() {
        return (x.clone(), ChainMap::identity(x));
    }
    if t < x.lo() {
        let z = DGComplex::zero(x.field());
        return (z.clone(), ChainMap::zero(x, &z, 0));
    }
    let field = x.field();
    let q = Quotient::new(field, x.dim(t), x.d(t + 1).image_basis().into_columns());
    let dims: Vec<usize> = (x.lo()..t).map(|m| x.dim(m)).chain(std::iter::once(q.dim())).collect();
    let tr = DGComplex::from_fn(field, x.lo(), dims, |m| {
        if m == x.lo() {
            Matrix::zero(field, 0, if m == t { q.dim() } else { x.dim(m) })
        } else if m == t {
            x.d(t).select_columns(&q.keep)
        } else {
            x.d(m).into_owned()
        }
    })
    .unwrap();
    let proj = ChainMap::from_fn(x.clone(), tr.clone(), 0, |m| {
        if m == t {
            q.projection(field)
        } else if m < t {
            Matrix::identity(field, x.dim(m))
        } else {
            Matrix::zero(field, 0, x.dim(m))
        }
    })
    .unwrap();
    (tr, proj)
}

/// One summand `x_p ⊗ y_q` of a tensor product degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub p: i64,
    pub q: i64,
    pub offset: usize,
    pub left: usize,
    pub right: usize,
}

/// Basis bookkeeping for `(x ⊗ y)_n = ⊕_{p+q=n} x_p ⊗ y_q`, `p` ascending, left factor major.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    pub lo: i64,
    pub dims: Vec<usize>,
    blocks: Vec<Vec<Block>>,
}

impl TensorLayout {
    pub fn new(lo_x: i64, dims_x: &[usize], lo_y: i64, dims_y: &[usize]) -> Self {
        let lo = lo_x + lo_y;
        if dims_x.is_empty() || dims_y.is_empty() {
            return TensorLayout { lo, dims: Vec::new(), blocks: Vec::new() };
        }
        let len = dims_x.len() + dims_y.len() - 1;
        let mut blocks = vec![Vec::new(); len];
        let mut dims = vec![0; len];
        for (k, slot) in blocks.iter_mut().enumerate() {
            for (i, &left) in dims_x.iter().enumerate() {
                if k < i || k - i >= dims_y.len() {
                    continue;
                }
                let right = dims_y[k - i];
                slot.push(Block { p: lo_x + i as i64, q: lo_y + (k - i) as i64, offset: dims[k], left, right });
                dims[k] += left * right;
            }
        }
        TensorLayout { lo, dims, blocks }
    }

    pub fn of<F: Field>(x: &DGComplex<F>, y: &DGComplex<F>) -> Self {
        Self::new(x.lo(), x.dims(), y.lo(), y.dims())
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.dims.len() {
            self.dims[k as usize]
        } else {
            0
        }
    }

    pub fn blocks(&self, n: i64) -> &[Block] {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.blocks.len() {
            &self.blocks[k as usize]
        } else {
            &[]
        }
    }

    pub fn block(&self, n: i64, p: i64) -> Option<&Block> {
        self.blocks(n).iter().find(|b| b.p == p)
    }

    /// Index of `u_a ⊗ v_b` with `u_a ∈ x_p`, `v_b ∈ y_q`, inside degree `p + q`.
    pub fn index(&self, p: i64, a: usize, q: i64, b: usize) -> usize {
        let blk = self.block(p + q, p).expect("block exists");
        blk.offset + a * blk.right + b
    }

    /// Inverse of [`TensorLayout::index`]: `(p, a, q, b)`.
    pub fn locate(&self, n: i64, idx: usize) -> (i64, usize, i64, usize) {
        let blk = self.blocks(n).iter().rev().find(|b| b.offset <= idx && b.left * b.right > 0).expect("index in range");
        let r = idx - blk.offset;
        (blk.p, r / blk.right, blk.q, r % blk.right)
    }
}

/// `x ⊗ y` with `d(u ⊗ v) = du ⊗ v + (-1)^{|u|} u ⊗ dv`.
pub fn tensor_complexes<F: Field>(x: &DGComplex<F>, y: &DGComplex<F>) -> Result<DGComplex<F>> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch(x.field().spec(), y.field().spec()));
    }
    let field = x.field();
    let lay = TensorLayout::of(x, y);
    DGComplex::from_fn(field, lay.lo, lay.dims.clone(), |n| {
        let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(lay.dim(n));
        for blk in lay.blocks(n) {
            let dx = x.d(blk.p);
            let dy = y.d(blk.q);
            let sign_odd = blk.p.rem_euclid(2) == 1;
            for a in 0..blk.left {
                for b in 0..blk.right {
                    let mut col = Vec::new();
                    for (i, v) in dx.column(a) {
                        col.push((lay.index(blk.p - 1, *i, blk.q, b), v.clone()));
                    }
                    for (j, w) in dy.column(b) {
                        col.push((lay.index(blk.p, a, blk.q - 1, *j), field.signed(sign_odd, w.clone())));
                    }
                    cols.push(col);
                }
            }
        }
        Matrix::from_columns(field, lay.dim(n - 1), cols)
    })
}

/// Checks that `⊕ H_p(x) ⊗ H_q(y) -> H_n(x ⊗ y)` is bijective in every degree.
pub fn kunneth_compare<F: Field>(x: &DGComplex<F>, y: &DGComplex<F>) -> Result<VerdictReport> {
    let hx = homology(x)?;
    let hy = homology(y)?;
    let t = tensor_complexes(x, y)?;
    let lay = TensorLayout::of(x, y);
    let field = x.field();
    let mut report = VerdictReport::holds("kunneth_compare");
    let mut table = BTreeMap::new();
    for n in lay.lo..=lay.hi() {
        let ht = HomologyDegree::compute(&t, n);
        let mut cols = Vec::new();
        for blk in lay.blocks(n) {
            let (Some(a), Some(b)) = (hx.degrees.get(&blk.p), hy.degrees.get(&blk.q)) else { continue };
            for z in a.reps.columns() {
                for w in b.reps.columns() {
                    let mut v = Vec::new();
                    for (i, s) in z {
                        for (j, r) in w {
                            v.push((blk.offset + i * blk.right + j, field.mul(s, r)));
                        }
                    }
                    let v = crate::linalg::collect_sparse(field, v);
                    cols.push(ht.project(&v).expect("tensor of cycles is a cycle"));
                }
            }
        }
        table.insert(n, ht.dim as i64);
        let m = Matrix::from_columns(field, ht.dim, cols);
        if m.cols() != ht.dim || m.rank() != ht.dim {
            report.verdict = Verdict::Fails;
            report.reason = Some(format!("Künneth map not bijective in degree {n}: {} classes onto {}", m.cols(), ht.dim));
            report = report.with_param("degree", n);
            break;
        }
    }
    Ok(report.with_table("tensor homology", table))
}
