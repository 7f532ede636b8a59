//! Tensor products of DG algebras and modules, Hom and tensor complexes over
//! `A`, and the comparison maps between them.

use std::sync::Arc;

use crate::complex::{quotient_truncate_above, shift, soft_truncate_below, tensor_complexes, ChainMap, DGComplex, Quotient, TensorLayout};
use crate::dg::{DGAlgebra, DGModule, LocalityCertificate};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SparseVec};
use crate::semifree::{tensor_semifree, SemifreeModule};
use crate::verdict::{TrustWindow, VerdictReport};

fn parity(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

fn same_algebra<F: Field>(a: &Arc<DGAlgebra<F>>, b: &Arc<DGAlgebra<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Assembles a matrix from blocks placed at `(row offset, column offset)`.
fn assemble<F: Field>(field: &F, rows: usize, cols: usize, blocks: impl IntoIterator<Item = (usize, usize, Matrix<F>)>) -> Matrix<F> {
    let mut columns: Vec<SparseVec<F::Elem>> = vec![Vec::new(); cols];
    for (r0, c0, m) in blocks {
        for (j, col) in m.into_columns().into_iter().enumerate() {
            columns[c0 + j].extend(col.into_iter().map(|(i, v)| (r0 + i, v)));
        }
    }
    Matrix::from_columns(field, rows, columns)
}

fn complex_from<F: Field>(field: &F, lo: i64, dims: Vec<usize>, d: impl Fn(i64) -> Matrix<F>) -> DGComplex<F> {
    if dims.is_empty() {
        return DGComplex::zero(field);
    }
    DGComplex::from_fn(field, lo, dims, d).expect("constructed differentials have consistent shapes")
}

/// `A' ⊗ A''` with `(a' ⊗ a'')(b' ⊗ b'') = (-1)^{|a''||b'|} a'b' ⊗ a''b''`.
pub fn tensor_algebras<F: Field>(a1: &DGAlgebra<F>, a2: &DGAlgebra<F>) -> Result<DGAlgebra<F>> {
    if a1.field() != a2.field() {
        return Err(Error::FieldMismatch(a1.field().spec(), a2.field().spec()));
    }
    let field = a1.field();
    let complex = tensor_complexes(a1.complex(), a2.complex())?;
    let lay = TensorLayout::of(a1.complex(), a2.complex());
    let mult = |i: usize, c: usize, j: i64| {
        let (p, a, q, b) = lay.locate(i as i64, c);
        let blocks = lay.blocks(j).iter().filter_map(|blk| {
            let l1 = a1.left(p as usize, a, blk.p);
            let l2 = a2.left(q as usize, b, blk.q);
            if l1.rows() == 0 || l2.rows() == 0 {
                return None;
            }
            let target = lay.block(i as i64 + j, p + blk.p)?;
            let k = l1.kron(&l2);
            let k = if parity(q * blk.p) { k.scaled(&field.neg(&field.one())) } else { k };
            Some((target.offset, blk.offset, k))
        });
        assemble(field, lay.dim(i as i64 + j), lay.dim(j), blocks.collect::<Vec<_>>())
    };
    let mut unit = Vec::new();
    for (u, x) in a1.unit() {
        for (v, y) in a2.unit() {
            unit.push((lay.index(0, *u, 0, *v), field.mul(x, y)));
        }
    }
    unit.sort_by_key(|e| e.0);
    let locality = match (a1.locality(), a2.locality()) {
        (Some(c1), Some(c2)) => {
            let mut ideal = Vec::new();
            for u in &c1.ideal {
                for b in 0..a2.dim(0) {
                    ideal.push(u.iter().map(|(i, x)| (lay.index(0, *i, 0, b), x.clone())).collect());
                }
            }
            for b in 0..a1.dim(0) {
                for u in &c2.ideal {
                    ideal.push(u.iter().map(|(i, x)| (lay.index(0, b, 0, *i), x.clone())).collect());
                }
            }
            Some(LocalityCertificate { ideal, exponent: c1.exponent + c2.exponent - 1 })
        }
        _ => None,
    };
    DGAlgebra::new(complex, mult, unit, locality)
}

/// `M' ⊗ M''` over `A' ⊗ A''` with `(a' ⊗ a'')(x' ⊗ x'') = (-1)^{|a''||x'|} a'x' ⊗ a''x''`.
pub fn tensor_modules<F: Field>(m1: &DGModule<F>, m2: &DGModule<F>) -> Result<DGModule<F>> {
    let a = Arc::new(tensor_algebras(m1.algebra(), m2.algebra())?);
    tensor_modules_over(a, m1, m2)
}

/// As [`tensor_modules`], over an already built `A' ⊗ A''`.
pub fn tensor_modules_over<F: Field>(algebra: Arc<DGAlgebra<F>>, m1: &DGModule<F>, m2: &DGModule<F>) -> Result<DGModule<F>> {
    if m1.field() != m2.field() {
        return Err(Error::FieldMismatch(m1.field().spec(), m2.field().spec()));
    }
    let (a1, a2) = (m1.algebra(), m2.algebra());
    if algebra.complex().dims().len() != TensorLayout::of(a1.complex(), a2.complex()).dims.len() {
        return Err(Error::InvalidStructure("algebra is not the tensor product of the module algebras".into()));
    }
    let complex = tensor_complexes(m1.complex(), m2.complex())?;
    let alg_lay = TensorLayout::of(a1.complex(), a2.complex());
    let lay = TensorLayout::of(m1.complex(), m2.complex());
    let (m1, m2) = (m1.clone(), m2.clone());
    let field = m1.field().clone();
    let action = move |i: usize, c: usize, n: i64| {
        let (p, a, q, b) = alg_lay.locate(i as i64, c);
        let blocks: Vec<_> = lay
            .blocks(n)
            .iter()
            .filter_map(|blk| {
                let l1 = m1.act(p as usize, a, blk.p);
                let l2 = m2.act(q as usize, b, blk.q);
                if l1.rows() == 0 || l2.rows() == 0 || blk.left * blk.right == 0 {
                    return None;
                }
                let target = lay.block(n + i as i64, blk.p + p)?;
                let k = l1.kron(&l2);
                let k = if parity(q * blk.p) { k.scaled(&field.neg(&field.one())) } else { k };
                Some((target.offset, blk.offset, k))
            })
            .collect();
        assemble(&field, lay.dim(n + i as i64), lay.dim(n), blocks)
    };
    DGModule::new_lazy(algebra, complex, Arc::new(action))
}

/// `Σⁿ M`: `(ΣⁿM)_i = M_{i-n}`, differential `(-1)ⁿ ∂`, action `a σx = (-1)^{n|a|} σ(ax)`.
pub fn shift_module<F: Field>(m: &DGModule<F>, n: i64) -> DGModule<F> {
    let complex = shift(m.complex(), n);
    let m2 = m.clone();
    let field = m.field().clone();
    let action = move |i: usize, a: usize, k: i64| {
        let x = m2.act(i, a, k - n).into_owned();
        if parity(n * i as i64) {
            x.scaled(&field.neg(&field.one()))
        } else {
            x
        }
    };
    DGModule::new_lazy(m.algebra().clone(), complex, Arc::new(action)).unwrap()
}

/// An `A`-linear chain map between DG modules, with its matrices.
#[derive(Clone, Debug)]
pub struct DGMorphism<F: Field> {
    pub source: DGModule<F>,
    pub target: DGModule<F>,
    pub map: ChainMap<F>,
}

impl<F: Field> DGMorphism<F> {
    pub fn new(source: DGModule<F>, target: DGModule<F>, map: ChainMap<F>) -> Result<Self> {
        let fits = |a: &DGComplex<F>, b: &DGComplex<F>| (a.is_zero() && b.is_zero()) || (a.lo() == b.lo() && a.dims() == b.dims());
        if !fits(source.complex(), map.source()) || !fits(target.complex(), map.target()) {
            return Err(Error::Dimension("morphism matrices do not match the modules".into()));
        }
        Ok(DGMorphism { source, target, map })
    }

    pub fn degree(&self) -> i64 {
        self.map.degree()
    }

    pub fn component(&self, n: i64) -> std::borrow::Cow<'_, Matrix<F>> {
        self.map.component(n)
    }

    /// First `(algebra degree, basis element, source degree)` where
    /// `f(a x) = (-1)^{|f||a|} a f(x)` fails.
    pub fn linearity_defect(&self) -> Option<(usize, usize, i64)> {
        let alg = self.source.algebra();
        let field = self.source.field();
        let deg = self.degree();
        for i in 0..=alg.top().max(0) as usize {
            let sign = field.sign(deg * i as i64);
            for a in 0..alg.dim(i as i64) {
                for n in self.source.lo()..=self.source.hi() {
                    if self.source.dim(n) == 0 || self.target.dim(n + i as i64 + deg) == 0 {
                        continue;
                    }
                    let lhs = self.component(n + i as i64).mul(&self.source.act(i, a, n)).unwrap();
                    let rhs = self.target.act(i, a, n + deg).mul(&self.component(n)).unwrap().scaled(&sign);
                    if lhs != rhs {
                        return Some((i, a, n));
                    }
                }
            }
        }
        None
    }

    /// Whether every component is square and invertible.
    pub fn is_bijective(&self) -> bool {
        let (s, t) = (self.source.complex(), self.target.complex());
        let lo = s.lo().min(t.lo() - self.degree());
        let hi = s.hi().max(t.hi() - self.degree());
        (lo..=hi).all(|n| {
            let (a, b) = (s.dim(n), t.dim(n + self.degree()));
            a == b && (a == 0 || self.component(n).is_invertible())
        })
    }

    /// Chain map, `A`-linear, and degreewise bijective.
    pub fn verify_isomorphism(&self, check: &str) -> VerdictReport {
        if let Some(n) = self.map.chain_defect() {
            return VerdictReport::fails(check, format!("not a chain map at degree {n}")).with_param("degree", n);
        }
        if let Some((i, a, n)) = self.linearity_defect() {
            return VerdictReport::fails(check, format!("not A-linear: basis {a} of degree {i} on degree {n}")).with_param("degree", n);
        }
        if !self.is_bijective() {
            return VerdictReport::fails(check, "not degreewise bijective");
        }
        VerdictReport::holds(check)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DGMorphism<F>) -> Result<DGMorphism<F>> {
        DGMorphism::new(self.source.clone(), other.target.clone(), self.map.then(&other.map)?)
    }
}

/// `τ_{≥n} M` with its inclusion into `M`.
pub fn truncate_module_below<F: Field>(m: &DGModule<F>, n: i64) -> DGMorphism<F> {
    let (t, incl) = soft_truncate_below(m.complex(), n);
    if t.is_zero() || n <= m.lo() {
        let module = DGModule::new_lazy(m.algebra().clone(), t, {
            let m = m.clone();
            Arc::new(move |i, a, k| m.act(i, a, k).into_owned())
        })
        .unwrap();
        return DGMorphism { source: module, target: m.clone(), map: incl };
    }
    let (kernel, free) = m.complex().d(n).kernel_with_free();
    let m2 = m.clone();
    let action = move |i: usize, a: usize, k: i64| {
        let act = m2.act(i, a, k);
        if k > n {
            return act.into_owned();
        }
        let moved = act.mul(&kernel).unwrap();
        if i == 0 {
            moved.select_rows(&free)
        } else {
            moved
        }
    };
    let module = DGModule::new_lazy(m.algebra().clone(), t, Arc::new(action)).unwrap();
    DGMorphism { source: module, target: m.clone(), map: incl }
}

/// `τ_{≤t} M = M / (M_{>t} + ∂M_{t+1})` with the projection from `M`.
pub fn truncate_module_above<F: Field>(m: &DGModule<F>, t: i64) -> DGMorphism<F> {
    let (tr, proj) = quotient_truncate_above(m.complex(), t);
    if tr.is_zero() || t >= m.hi() {
        let module = DGModule::new_lazy(m.algebra().clone(), tr, {
            let m = m.clone();
            Arc::new(move |i, a, k| m.act(i, a, k).into_owned())
        })
        .unwrap();
        return DGMorphism { source: m.clone(), target: module, map: proj };
    }
    let field = m.field().clone();
    let q = Quotient::new(&field, m.dim(t), m.complex().d(t + 1).image_basis().into_columns());
    let lift = Matrix::from_columns(&field, m.dim(t), q.keep.iter().map(|&i| vec![(i, field.one())]).collect());
    let pt = q.projection(&field);
    let m2 = m.clone();
    let dim_tr = tr.clone();
    let action = move |i: usize, a: usize, k: i64| {
        let target = k + i as i64;
        if target > t {
            return Matrix::zero(&field, 0, dim_tr.dim(k));
        }
        let act = m2.act(i, a, k);
        let src = if k == t { act.mul(&lift).unwrap() } else { act.into_owned() };
        if target == t {
            pt.mul(&src).unwrap()
        } else {
            src
        }
    };
    let module = DGModule::new_lazy(m.algebra().clone(), tr, Arc::new(action)).unwrap();
    DGMorphism { source: m.clone(), target: module, map: proj }
}

/// Per-degree placement of one block per generator.
#[derive(Clone, Debug)]
struct GenBlocks {
    lo: i64,
    /// `(generator, offset, size)` sorted by generator
    degrees: Vec<Vec<(usize, usize, usize)>>,
    dims: Vec<usize>,
}

impl GenBlocks {
    /// `span(k)` lists the degrees where generator `k` contributes, `size(n, k)` the block size.
    fn build(gens: usize, span: impl Fn(usize) -> (i64, i64), size: impl Fn(i64, usize) -> usize) -> Self {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for k in 0..gens {
            let (a, b) = span(k);
            if a <= b {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if lo > hi {
            return GenBlocks { lo: 0, degrees: Vec::new(), dims: Vec::new() };
        }
        let len = (hi - lo + 1) as usize;
        let mut degrees: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); len];
        let mut dims = vec![0; len];
        for k in 0..gens {
            let (a, b) = span(k);
            for n in a..=b {
                let s = size(n, k);
                if s > 0 {
                    let slot = (n - lo) as usize;
                    degrees[slot].push((k, dims[slot], s));
                    dims[slot] += s;
                }
            }
        }
        GenBlocks { lo, degrees, dims }
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let k = n - self.lo;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    fn dim(&self, n: i64) -> usize {
        self.slot(n).map_or(0, |k| self.dims[k])
    }

    fn blocks(&self, n: i64) -> &[(usize, usize, usize)] {
        self.slot(n).map_or(&[], |k| &self.degrees[k])
    }

    fn offset(&self, n: i64, gen: usize) -> Option<usize> {
        let b = self.blocks(n);
        b.binary_search_by_key(&gen, |e| e.0).ok().map(|i| b[i].1)
    }

    fn locate(&self, n: i64, idx: usize) -> (usize, usize) {
        let b = self.blocks(n);
        let i = b.partition_point(|e| e.1 <= idx) - 1;
        (b[i].0, idx - b[i].1)
    }
}

/// `Hom_A(P, Y)` for semifree `P`: degree `n` is `⊕_k Y_{|e_k|+n}`, a map
/// being recorded by its values on the basis.
#[derive(Clone, Debug)]
pub struct HomComplex<F: Field> {
    source: SemifreeModule<F>,
    target: DGModule<F>,
    blocks: Arc<GenBlocks>,
    module: DGModule<F>,
}

impl<F: Field> HomComplex<F> {
    pub fn source(&self) -> &SemifreeModule<F> {
        &self.source
    }
    pub fn target(&self) -> &DGModule<F> {
        &self.target
    }
    pub fn module(&self) -> &DGModule<F> {
        &self.module
    }
    pub fn complex(&self) -> &DGComplex<F> {
        self.module.complex()
    }

    /// Offset of the value at `e_gen` inside degree `n`.
    pub fn offset(&self, n: i64, gen: usize) -> Option<usize> {
        self.blocks.offset(n, gen)
    }

    /// `(generator, index in Y_{|e_gen|+n})` of a coordinate of degree `n`.
    pub fn locate(&self, n: i64, idx: usize) -> (usize, usize) {
        self.blocks.locate(n, idx)
    }

    /// Value at `e_gen` of a degree-`n` map.
    pub fn value(&self, n: i64, f: &[(usize, F::Elem)], gen: usize) -> SparseVec<F::Elem> {
        let Some(off) = self.offset(n, gen) else { return Vec::new() };
        let size = self.target.dim(self.source.degree(gen) + n);
        f.iter().filter(|(i, _)| *i >= off && *i < off + size).map(|(i, x)| (i - off, x.clone())).collect()
    }

    /// The degree-`n` map with prescribed values on the basis.
    pub fn from_values(&self, n: i64, values: impl IntoIterator<Item = (usize, SparseVec<F::Elem>)>) -> SparseVec<F::Elem> {
        let mut out = Vec::new();
        for (gen, v) in values {
            if let Some(off) = self.offset(n, gen) {
                out.extend(v.into_iter().map(|(i, x)| (off + i, x)));
            }
        }
        crate::linalg::collect_sparse(self.source.field(), out)
    }
}

impl<F: Field> HomComplex<F> {
    /// The degree-`n` element `f` as a map `P -> Y` on all of `P`, using
    /// `f(a e) = (-1)^{n|a|} a f(e)`.
    pub fn as_map(&self, n: i64, f: &[(usize, F::Elem)]) -> ChainMap<F> {
        let p = &self.source;
        let y = &self.target;
        let field = y.field().clone();
        let src = p.module().complex().clone();
        let values: Vec<SparseVec<F::Elem>> = (0..p.rank()).map(|k| self.value(n, f, k)).collect();
        ChainMap::from_fn(src.clone(), y.complex().clone(), n, |m| {
            let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(src.dim(m));
            for k in p.gens_in(m) {
                let i = m - p.degree(k);
                let odd = parity(n * i);
                for a in 0..p.algebra().dim(i) {
                    if values[k].is_empty() {
                        cols.push(Vec::new());
                        continue;
                    }
                    let v = y.act(i as usize, a, p.degree(k) + n).mul_vec(&values[k]);
                    cols.push(v.into_iter().map(|(r, x)| (r, field.signed(odd, x))).collect());
                }
            }
            Matrix::from_columns(&field, y.dim(m + n), cols)
        })
        .expect("components have the shapes of the complexes")
    }

    /// Matrix of `f ↦ f(z)` from `Hom_n` to `Y_{b+n}` for `z ∈ P_b`.
    pub fn evaluation_at(&self, n: i64, b: i64, z: &[(usize, F::Elem)]) -> Matrix<F> {
        let p = &self.source;
        let y = &self.target;
        let field = y.field().clone();
        let mut blocks: Vec<(usize, usize, Matrix<F>)> = Vec::new();
        for (idx, c) in z {
            let (k, a) = p.locate(b, *idx);
            let i = b - p.degree(k);
            let Some(off) = self.offset(n, k) else { continue };
            let act = y.act(i as usize, a, p.degree(k) + n).scaled(&field.signed(parity(n * i), c.clone()));
            blocks.push((0, off, act));
        }
        let rows = y.dim(b + n);
        let cols = self.complex().dim(n);
        let mut columns: Vec<SparseVec<F::Elem>> = vec![Vec::new(); cols];
        for (_, c0, m) in blocks {
            for (j, col) in m.into_columns().into_iter().enumerate() {
                columns[c0 + j].extend(col);
            }
        }
        Matrix::from_columns(&field, rows, columns)
    }
}

/// `Hom_A(P, Y)` with `∂f = ∂∘f - (-1)^{|f|} f∘∂` and `(a·f)(x) = a·f(x)`.
pub fn hom_complex<F: Field>(p: &SemifreeModule<F>, y: &DGModule<F>) -> Result<HomComplex<F>> {
    if !same_algebra(p.algebra(), y.algebra()) {
        return Err(Error::InvalidStructure("source and target are modules over different algebras".into()));
    }
    let field = y.field().clone();
    let (ylo, yhi) = (y.lo(), y.hi());
    let blocks = Arc::new(if y.complex().is_zero() {
        GenBlocks::build(0, |_| (0, -1), |_, _| 0)
    } else {
        GenBlocks::build(p.rank(), |k| (ylo - p.degree(k), yhi - p.degree(k)), |n, k| y.dim(p.degree(k) + n))
    });
    // occurrences[k]: (j, algebra degree, basis, coefficient) with e_k in ∂e_j
    let mut occurrences: Vec<Vec<(usize, usize, usize, F::Elem)>> = vec![Vec::new(); p.rank()];
    for j in 0..p.rank() {
        for t in p.diff(j) {
            occurrences[t.gen].push((j, p.term_degree(j, t) as usize, t.alg, t.coeff.clone()));
        }
    }
    let d = |n: i64| {
        let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(blocks.dim(n));
        for &(k, _, size) in blocks.blocks(n) {
            let dk = p.degree(k);
            let dy = y.complex().d(dk + n);
            let acts: Vec<_> = occurrences[k].iter().map(|(j, s, alg, c)| (*j, y.act(*s, *alg, dk + n), c)).collect();
            let own = blocks.offset(n - 1, k);
            for c in 0..size {
                let mut col = Vec::new();
                if let Some(off) = own {
                    col.extend(dy.column(c).iter().map(|(i, x)| (off + i, x.clone())));
                }
                for (j, act, lambda) in &acts {
                    let s = (p.degree(*j) - 1 - dk) as i64;
                    let Some(off) = blocks.offset(n - 1, *j) else { continue };
                    let odd = !parity(n + n * s);
                    for (i, x) in act.column(c) {
                        col.push((off + i, field.signed(odd, field.mul(lambda, x))));
                    }
                }
                cols.push(col);
            }
        }
        Matrix::from_columns(&field, blocks.dim(n - 1), cols)
    };
    let dims = blocks.dims.clone();
    let complex = complex_from(&field, blocks.lo, dims, d);
    let action = {
        let blocks = blocks.clone();
        let y = y.clone();
        let degrees = p.degrees().to_vec();
        let field = field.clone();
        move |i: usize, b: usize, n: i64| {
            let rows = blocks.dim(n + i as i64);
            let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(blocks.dim(n));
            for &(k, _, size) in blocks.blocks(n) {
                let act = y.act(i, b, degrees[k] + n);
                let off = blocks.offset(n + i as i64, k);
                for c in 0..size {
                    cols.push(match off {
                        Some(off) => act.column(c).iter().map(|(r, x)| (off + r, x.clone())).collect(),
                        None => Vec::new(),
                    });
                }
            }
            Matrix::from_columns(&field, rows, cols)
        }
    };
    let module = DGModule::new_lazy(p.algebra().clone(), complex, Arc::new(action))?;
    Ok(HomComplex { source: p.clone(), target: y.clone(), blocks, module })
}

/// `P ⊗_A Y` for semifree `P`: degree `n` is `⊕_k e_k ⊗ Y_{n-|e_k|}`.
#[derive(Clone, Debug)]
pub struct TensorOverA<F: Field> {
    source: SemifreeModule<F>,
    right: DGModule<F>,
    blocks: Arc<GenBlocks>,
    module: DGModule<F>,
}

impl<F: Field> TensorOverA<F> {
    pub fn semifree(&self) -> &SemifreeModule<F> {
        &self.source
    }
    pub fn right(&self) -> &DGModule<F> {
        &self.right
    }
    pub fn module(&self) -> &DGModule<F> {
        &self.module
    }
    pub fn complex(&self) -> &DGComplex<F> {
        self.module.complex()
    }
    /// Index of `e_gen ⊗ y_i` in degree `n`.
    pub fn index(&self, n: i64, gen: usize, i: usize) -> Option<usize> {
        self.blocks.offset(n, gen).map(|o| o + i)
    }
    pub fn locate(&self, n: i64, idx: usize) -> (usize, usize) {
        self.blocks.locate(n, idx)
    }
}

/// `P ⊗_A Y` with `∂(e ⊗ y) = Σ λ (-1)^{|a||e_j|} e_j ⊗ a y + (-1)^{|e|} e ⊗ ∂y`
/// and `b (e ⊗ y) = (-1)^{|b||e|} e ⊗ b y`.
pub fn tensor_over_a<F: Field>(p: &SemifreeModule<F>, y: &DGModule<F>) -> Result<TensorOverA<F>> {
    if !same_algebra(p.algebra(), y.algebra()) {
        return Err(Error::InvalidStructure("factors are modules over different algebras".into()));
    }
    let field = y.field().clone();
    let (ylo, yhi) = (y.lo(), y.hi());
    let blocks = Arc::new(if y.complex().is_zero() {
        GenBlocks::build(0, |_| (0, -1), |_, _| 0)
    } else {
        GenBlocks::build(p.rank(), |k| (ylo + p.degree(k), yhi + p.degree(k)), |n, k| y.dim(n - p.degree(k)))
    });
    let d = |n: i64| {
        let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(blocks.dim(n));
        for &(k, _, size) in blocks.blocks(n) {
            let dk = p.degree(k);
            let dy = y.complex().d(n - dk);
            let own = blocks.offset(n - 1, k);
            let terms: Vec<_> = p
                .diff(k)
                .iter()
                .map(|t| {
                    let s = p.term_degree(k, t);
                    let odd = parity(s * p.degree(t.gen));
                    (blocks.offset(n - 1, t.gen), y.act(s as usize, t.alg, n - dk), field.signed(odd, t.coeff.clone()))
                })
                .collect();
            for c in 0..size {
                let mut col = Vec::new();
                if let Some(off) = own {
                    col.extend(dy.column(c).iter().map(|(i, x)| (off + i, field.signed(parity(dk), x.clone()))));
                }
                for (off, act, lambda) in &terms {
                    let Some(off) = off else { continue };
                    col.extend(act.column(c).iter().map(|(i, x)| (off + i, field.mul(lambda, x))));
                }
                cols.push(col);
            }
        }
        Matrix::from_columns(&field, blocks.dim(n - 1), cols)
    };
    let complex = complex_from(&field, blocks.lo, blocks.dims.clone(), d);
    let action = {
        let blocks = blocks.clone();
        let y = y.clone();
        let degrees = p.degrees().to_vec();
        let field = field.clone();
        move |i: usize, b: usize, n: i64| {
            let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(blocks.dim(n));
            for &(k, _, size) in blocks.blocks(n) {
                let act = y.act(i, b, n - degrees[k]);
                let off = blocks.offset(n + i as i64, k);
                let odd = parity(i as i64 * degrees[k]);
                for c in 0..size {
                    cols.push(match off {
                        Some(off) => act.column(c).iter().map(|(r, x)| (off + r, field.signed(odd, x.clone()))).collect(),
                        None => Vec::new(),
                    });
                }
            }
            Matrix::from_columns(&field, blocks.dim(n + i as i64), cols)
        }
    };
    let module = DGModule::new_lazy(p.algebra().clone(), complex, Arc::new(action))?;
    Ok(TensorOverA { source: p.clone(), right: y.clone(), blocks, module })
}

/// `P ⊗_A X -> Y`, `e_k ⊗ x ↦ (-1)^{|x||e_k|} ι(x)(e_k)`, where `ι : X -> Hom_A(P, Y)`
/// and `t` is `P ⊗_A X`.
pub fn evaluation_through<F: Field>(t: &TensorOverA<F>, hom: &HomComplex<F>, iota: &ChainMap<F>) -> Result<DGMorphism<F>> {
    if iota.degree() != 0 || t.semifree().degrees() != hom.source().degrees() {
        return Err(Error::Precondition("evaluation needs a degree-0 map into Hom_A(P, Y) for the same P".into()));
    }
    let p = t.semifree();
    let y = hom.target();
    let field = y.field().clone();
    let src = t.complex().clone();
    let map = ChainMap::from_fn(src.clone(), y.complex().clone(), 0, |n| {
        let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(src.dim(n));
        for &(k, _, size) in t.blocks.blocks(n) {
            let m = n - p.degree(k);
            let comp = iota.component(m);
            let odd = parity(m * p.degree(k));
            for c in 0..size {
                let v = hom.value(m, comp.column(c), k);
                cols.push(v.into_iter().map(|(i, x)| (i, field.signed(odd, x))).collect());
            }
        }
        Matrix::from_columns(&field, y.dim(n), cols)
    })?;
    DGMorphism::new(t.module().clone(), y.clone(), map)
}

/// The evaluation morphism `P ⊗_A Hom_A(P, M) -> M`.
pub fn evaluation_map<F: Field>(p: &SemifreeModule<F>, m: &DGModule<F>) -> Result<DGMorphism<F>> {
    let hom = hom_complex(p, m)?;
    let t = tensor_over_a(p, hom.module())?;
    evaluation_through(&t, &hom, &ChainMap::identity(hom.complex()))
}

/// A morphism of DG algebras, one matrix per degree.
#[derive(Clone, Debug)]
pub struct AlgebraMap<F: Field> {
    pub source: Arc<DGAlgebra<F>>,
    pub target: Arc<DGAlgebra<F>>,
    comps: Vec<Matrix<F>>,
}

impl<F: Field> AlgebraMap<F> {
    pub fn identity(a: &Arc<DGAlgebra<F>>) -> Self {
        let comps = a.complex().dims().iter().map(|&d| Matrix::identity(a.field(), d)).collect();
        AlgebraMap { source: a.clone(), target: a.clone(), comps }
    }

    /// `a' ↦ a' ⊗ 1` into `A' ⊗ A''`.
    pub fn left_inclusion(a1: &Arc<DGAlgebra<F>>, a2: &DGAlgebra<F>, target: &Arc<DGAlgebra<F>>) -> Self {
        let lay = TensorLayout::of(a1.complex(), a2.complex());
        let f = a1.field();
        let comps = (0..a1.complex().dims().len() as i64)
            .map(|i| {
                let cols = (0..a1.dim(i)).map(|a| a2.unit().iter().map(|(u, x)| (lay.index(i, a, 0, *u), x.clone())).collect()).collect();
                Matrix::from_columns(f, lay.dim(i), cols)
            })
            .collect();
        AlgebraMap { source: a1.clone(), target: target.clone(), comps }
    }

    /// `a'' ↦ 1 ⊗ a''` into `A' ⊗ A''`.
    pub fn right_inclusion(a1: &DGAlgebra<F>, a2: &Arc<DGAlgebra<F>>, target: &Arc<DGAlgebra<F>>) -> Self {
        let lay = TensorLayout::of(a1.complex(), a2.complex());
        let f = a1.field();
        let comps = (0..a2.complex().dims().len() as i64)
            .map(|i| {
                let cols = (0..a2.dim(i)).map(|b| a1.unit().iter().map(|(u, x)| (lay.index(0, *u, i, b), x.clone())).collect()).collect();
                Matrix::from_columns(f, lay.dim(i), cols)
            })
            .collect();
        AlgebraMap { source: a2.clone(), target: target.clone(), comps }
    }

    /// Image of basis `b` of degree `i`.
    pub fn image(&self, i: usize, b: usize) -> &SparseVec<F::Elem> {
        self.comps[i].column(b)
    }
}

/// `V ⊗_B X` for a `C`-module `V`, an algebra map `φ : B -> C` and a `B`-module `X`:
/// the quotient of `V ⊗_k X` by `(-1)^{|b||v|} φ(b)v ⊗ x - v ⊗ bx`, a `C`-module
/// through `V`.
#[derive(Clone)]
pub struct BalancedTensor<F: Field> {
    pub layout: TensorLayout,
    quotients: Arc<Vec<Quotient<F>>>,
    module: DGModule<F>,
}

impl<F: Field> std::fmt::Debug for BalancedTensor<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BalancedTensor").field("layout", &self.layout).field("dims", &self.module.complex().dims()).finish()
    }
}

impl<F: Field> BalancedTensor<F> {
    pub fn module(&self) -> &DGModule<F> {
        &self.module
    }

    fn quotient(&self, n: i64) -> Option<&Quotient<F>> {
        let k = n - self.layout.lo;
        (k >= 0).then(|| self.quotients.get(k as usize)).flatten()
    }

    /// Dimension of the ambient `V ⊗_k X` in degree `n`.
    pub fn ambient_dim(&self, n: i64) -> usize {
        self.layout.dim(n)
    }

    /// Class of an ambient vector of degree `n`.
    pub fn class(&self, n: i64, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.quotient(n).map_or(Vec::new(), |q| q.project(v))
    }

    /// Ambient basis index representing quotient basis element `i`.
    pub fn representative(&self, n: i64, i: usize) -> usize {
        self.quotient(n).expect("degree in range").keep[i]
    }
}

pub fn balanced_tensor<F: Field>(v: &DGModule<F>, phi: &AlgebraMap<F>, x: &DGModule<F>) -> Result<BalancedTensor<F>> {
    if !same_algebra(&phi.target, v.algebra()) || !same_algebra(&phi.source, x.algebra()) {
        return Err(Error::InvalidStructure("algebra map does not match the module algebras".into()));
    }
    let field = v.field().clone();
    let ambient = tensor_complexes(v.complex(), x.complex())?;
    let lay = TensorLayout::of(v.complex(), x.complex());
    let b = &phi.source;
    let mut relations: Vec<Vec<SparseVec<F::Elem>>> = vec![Vec::new(); lay.dims.len()];
    let slot = |n: i64| (n - lay.lo) as usize;
    for n in lay.lo..=lay.hi() {
        for blk in lay.blocks(n) {
            if blk.left * blk.right == 0 {
                continue;
            }
            for i in 0..=b.top().max(0) {
                if n + i > lay.hi() {
                    break;
                }
                for bb in 0..b.dim(i) {
                    let img = phi.image(i as usize, bb);
                    let pv = v.act_elem_matrix(i as usize, img, blk.p);
                    let bx = x.act(i as usize, bb, blk.q);
                    let odd = parity(i * blk.p);
                    for a in 0..blk.left {
                        for c in 0..blk.right {
                            let mut rel = Vec::new();
                            for (r, y) in pv.column(a) {
                                rel.push((lay.index(blk.p + i, *r, blk.q, c), field.signed(odd, y.clone())));
                            }
                            for (r, y) in bx.column(c) {
                                rel.push((lay.index(blk.p, a, blk.q + i, *r), field.neg(y)));
                            }
                            if !rel.is_empty() {
                                relations[slot(n + i)].push(rel);
                            }
                        }
                    }
                }
            }
        }
    }
    let quotients: Vec<Quotient<F>> =
        relations.into_iter().enumerate().map(|(k, rels)| Quotient::new(&field, lay.dims[k], rels.into_iter().map(|r| crate::linalg::collect_sparse(&field, r)))).collect();
    let dims: Vec<usize> = quotients.iter().map(|q| q.dim()).collect();
    let quotients = Arc::new(quotients);
    let lo = lay.lo;
    let complex = complex_from(&field, lo, dims, |n| {
        let (Some(q), qd) = (quotients.get(slot(n)), slot(n).checked_sub(1).and_then(|k| quotients.get(k))) else { unreachable!() };
        let rows = qd.map_or(0, |q| q.dim());
        let d = ambient.d(n);
        let cols = q.keep.iter().map(|&i| qd.map_or(Vec::new(), |qd| qd.project(d.column(i)))).collect();
        Matrix::from_columns(&field, rows, cols)
    });
    let action = {
        let quotients = quotients.clone();
        let lay = lay.clone();
        let v = v.clone();
        let field = field.clone();
        move |i: usize, c: usize, n: i64| {
            let target = n + i as i64;
            let tq = (target <= lay.hi()).then(|| &quotients[(target - lay.lo) as usize]);
            let q = &quotients[(n - lay.lo) as usize];
            let cols = q
                .keep
                .iter()
                .map(|&idx| {
                    let Some(tq) = tq else { return Vec::new() };
                    let (p, a, r, b) = lay.locate(n, idx);
                    let col: SparseVec<F::Elem> =
                        v.act(i, c, p).column(a).iter().map(|(s, y)| (lay.index(p + i as i64, *s, r, b), y.clone())).collect();
                    tq.project(&crate::linalg::collect_sparse(&field, col))
                })
                .collect();
            Matrix::from_columns(&field, tq.map_or(0, |q| q.dim()), cols)
        }
    };
    let module = DGModule::new_lazy(v.algebra().clone(), complex, Arc::new(action))?;
    Ok(BalancedTensor { layout: lay, quotients, module })
}

/// `α : X' ⊗ X'' -> (A ⊗_{A'} X') ⊗_A (A ⊗_{A''} X'')`, `x' ⊗ x'' ↦ (1 ⊗ x') ⊗ (1 ⊗ x'')`.
pub fn alpha_map<F: Field>(x1: &DGModule<F>, x2: &DGModule<F>) -> Result<DGMorphism<F>> {
    let (a1, a2) = (x1.algebra(), x2.algebra());
    let a = Arc::new(tensor_algebras(a1, a2)?);
    let field = a.field().clone();
    let reg = DGModule::regular(a.clone());
    let v1 = balanced_tensor(&reg, &AlgebraMap::left_inclusion(a1, a2, &a), x1)?;
    let v2 = balanced_tensor(&reg, &AlgebraMap::right_inclusion(a1, a2, &a), x2)?;
    let outer = balanced_tensor(v1.module(), &AlgebraMap::identity(&a), v2.module())?;
    let source = tensor_modules_over(a.clone(), x1, x2)?;
    let lay = TensorLayout::of(x1.complex(), x2.complex());
    let one_tensor = |bt: &BalancedTensor<F>, deg: i64, x: usize| {
        let amb = a.unit().iter().map(|(u, c)| (bt.layout.index(0, *u, deg, x), c.clone())).collect();
        bt.class(deg, &crate::linalg::collect_sparse(&field, amb))
    };
    let map = ChainMap::from_fn(source.complex().clone(), outer.module().complex().clone(), 0, |n| {
        let cols = (0..lay.dim(n))
            .map(|idx| {
                let (p, i, q, j) = lay.locate(n, idx);
                let (u, w) = (one_tensor(&v1, p, i), one_tensor(&v2, q, j));
                let mut amb = Vec::new();
                for (s, x) in &u {
                    for (t, y) in &w {
                        amb.push((outer.layout.index(p, *s, q, *t), field.mul(x, y)));
                    }
                }
                outer.class(n, &crate::linalg::collect_sparse(&field, amb))
            })
            .collect();
        Matrix::from_columns(&field, outer.module().dim(n), cols)
    })?;
    DGMorphism::new(source, outer.module().clone(), map)
}

/// The source of [`gamma_tilde`] and its balanced target, exposed for dimension bookkeeping.
pub struct GammaTilde<F: Field> {
    pub morphism: DGMorphism<F>,
    pub target: BalancedTensor<F>,
}

/// `γ̃ : (X' ⊗_{A'} Y') ⊗ (X'' ⊗_{A''} Y'') -> (X' ⊗ X'') ⊗_A (Y' ⊗ Y'')`,
/// `(x' ⊗ y') ⊗ (x'' ⊗ y'') ↦ (-1)^{|y'||x''|} (x' ⊗ x'') ⊗ (y' ⊗ y'')`.
pub fn gamma_tilde<F: Field>(x1: &DGModule<F>, y1: &DGModule<F>, x2: &DGModule<F>, y2: &DGModule<F>) -> Result<GammaTilde<F>> {
    let (a1, a2) = (x1.algebra(), x2.algebra());
    let a = Arc::new(tensor_algebras(a1, a2)?);
    let field = a.field().clone();
    let b1 = balanced_tensor(x1, &AlgebraMap::identity(a1), y1)?;
    let b2 = balanced_tensor(x2, &AlgebraMap::identity(a2), y2)?;
    let source = tensor_modules_over(a.clone(), b1.module(), b2.module())?;
    let xx = tensor_modules_over(a.clone(), x1, x2)?;
    let yy = tensor_modules_over(a.clone(), y1, y2)?;
    let target = balanced_tensor(&xx, &AlgebraMap::identity(&a), &yy)?;
    let lay = TensorLayout::of(b1.module().complex(), b2.module().complex());
    let lx = TensorLayout::of(x1.complex(), x2.complex());
    let ly = TensorLayout::of(y1.complex(), y2.complex());
    let map = ChainMap::from_fn(source.complex().clone(), target.module().complex().clone(), 0, |n| {
        let cols = (0..lay.dim(n))
            .map(|idx| {
                let (p, u, q, w) = lay.locate(n, idx);
                let (p1, xa, r1, ya) = b1.layout.locate(p, b1.representative(p, u));
                let (p2, xb, r2, yb) = b2.layout.locate(q, b2.representative(q, w));
                let ix = lx.index(p1, xa, p2, xb);
                let iy = ly.index(r1, ya, r2, yb);
                let amb = vec![(target.layout.index(p1 + p2, ix, r1 + r2, iy), field.sign(r1 * p2))];
                target.class(n, &amb)
            })
            .collect();
        Matrix::from_columns(&field, target.module().dim(n), cols)
    })?;
    let morphism = DGMorphism::new(source, target.module().clone(), map)?;
    Ok(GammaTilde { morphism, target })
}

/// `f' ⊠ f''` on `X' ⊗ X''`: `x' ⊗ x'' ↦ (-1)^{|f''||x'|} f'(x') ⊗ f''(x'')`.
pub fn boxtimes<F: Field>(f1: &ChainMap<F>, f2: &ChainMap<F>) -> Result<ChainMap<F>> {
    let field = f1.source().field().clone();
    let (d1, d2) = (f1.degree(), f2.degree());
    let src = tensor_complexes(f1.source(), f2.source())?;
    let tgt = tensor_complexes(f1.target(), f2.target())?;
    let ls = TensorLayout::of(f1.source(), f2.source());
    let lt = TensorLayout::of(f1.target(), f2.target());
    ChainMap::from_fn(src, tgt, d1 + d2, |n| {
        let blocks: Vec<_> = ls
            .blocks(n)
            .iter()
            .filter_map(|blk| {
                let target = lt.block(n + d1 + d2, blk.p + d1)?;
                if target.q != blk.q + d2 || blk.left * blk.right == 0 || target.left * target.right == 0 {
                    return None;
                }
                let k = f1.component(blk.p).kron(&f2.component(blk.q));
                let k = if parity(d2 * blk.p) { k.scaled(&field.neg(&field.one())) } else { k };
                Some((target.offset, blk.offset, k))
            })
            .collect();
        assemble(&field, lt.dim(n + d1 + d2), ls.dim(n), blocks)
    })
}

/// [`boxtimes`] of module morphisms, as a morphism over `A' ⊗ A''`.
pub fn boxtimes_morphisms<F: Field>(algebra: Arc<DGAlgebra<F>>, f1: &DGMorphism<F>, f2: &DGMorphism<F>) -> Result<DGMorphism<F>> {
    let map = boxtimes(&f1.map, &f2.map)?;
    let source = tensor_modules_over(algebra.clone(), &f1.source, &f2.source)?;
    let target = tensor_modules_over(algebra, &f1.target, &f2.target)?;
    DGMorphism::new(source, target, map)
}

/// `η̃ : Hom_{A'}(N', M') ⊗ Hom_{A''}(N'', M'') -> Hom_A(N' ⊗ N'', M' ⊗ M'')`, `f' ⊗ f'' ↦ f' ⊠ f''`.
pub fn eta_tilde<F: Field>(n1: &SemifreeModule<F>, m1: &DGModule<F>, n2: &SemifreeModule<F>, m2: &DGModule<F>) -> Result<DGMorphism<F>> {
    let a = Arc::new(tensor_algebras(n1.algebra(), n2.algebra())?);
    let field = a.field().clone();
    let h1 = hom_complex(n1, m1)?;
    let h2 = hom_complex(n2, m2)?;
    let source = tensor_modules_over(a.clone(), h1.module(), h2.module())?;
    let (n, pos) = tensor_semifree(a.clone(), n1, n2);
    let m = tensor_modules_over(a.clone(), m1, m2)?;
    let h = hom_complex(&n, &m)?;
    let ls = TensorLayout::of(h1.complex(), h2.complex());
    let lm = TensorLayout::of(m1.complex(), m2.complex());
    let map = ChainMap::from_fn(source.complex().clone(), h.complex().clone(), 0, |deg| {
        let cols = (0..ls.dim(deg))
            .map(|idx| {
                let (s1, i1, s2, i2) = ls.locate(deg, idx);
                let (k, ya) = h1.locate(s1, i1);
                let (l, yb) = h2.locate(s2, i2);
                let (da, db) = (n1.degree(k) + s1, n2.degree(l) + s2);
                let off = h.offset(deg, pos[k][l]).expect("value space is nonzero");
                vec![(off + lm.index(da, ya, db, yb), field.sign(s2 * n1.degree(k)))]
            })
            .collect();
        Matrix::from_columns(&field, h.complex().dim(deg), cols)
    })?;
    DGMorphism::new(source, h.module().clone(), map)
}

/// Whether `f` induces isomorphisms on homology in source degrees of `window`.
pub fn morphism_quasi_iso_on<F: Field>(f: &DGMorphism<F>, window: &TrustWindow) -> Result<VerdictReport> {
    crate::complex::is_quasi_iso_on(&f.map, window)
}
