//! DG algebras and DG modules as structure-constant tables, with validators.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::complex::{validate_complex, DGComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{axpy, Echelon, Matrix, SparseVec};
use crate::verdict::{Verdict, VerdictReport};

/// Callback producing the action of basis `a` of algebra degree `i` on module degree `n`.
pub type ActionFn<F> = Arc<dyn Fn(usize, usize, i64) -> Matrix<F> + Send + Sync>;

/// Left action of the basis of an algebra on a graded space.
///
/// Cell `[i][a][k]` sends degree `lo + k` to degree `lo + k + i` for the `a`-th
/// basis element of algebra degree `i`. Cells are either filled up front or
/// computed on first use from a callback.
#[derive(Clone)]
pub struct ActionTable<F: Field> {
    field: F,
    lo: i64,
    dims: Vec<usize>,
    cells: Arc<Vec<Vec<Vec<OnceLock<Matrix<F>>>>>>,
    source: Option<ActionFn<F>>,
}

impl<F: Field> std::fmt::Debug for ActionTable<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ActionTable").field("lo", &self.lo).field("dims", &self.dims).field("lazy", &self.source.is_some()).finish()
    }
}

impl<F: Field> PartialEq for ActionTable<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.lo != other.lo || self.dims != other.dims || self.shape() != other.shape() {
            return false;
        }
        self.shapes().into_iter().all(|(i, a, n, _, _)| self.get(i, a, n) == other.get(i, a, n))
    }
}

impl<F: Field> Eq for ActionTable<F> {}

impl<F: Field> ActionTable<F> {
    fn dim_at(dims: &[usize], lo: i64, n: i64) -> usize {
        let k = n - lo;
        if k >= 0 && (k as usize) < dims.len() {
            dims[k as usize]
        } else {
            0
        }
    }

    fn empty_cells(alg_dims: &[usize], len: usize) -> Vec<Vec<Vec<OnceLock<Matrix<F>>>>> {
        alg_dims.iter().map(|&ai| (0..ai).map(|_| (0..len).map(|_| OnceLock::new()).collect()).collect()).collect()
    }

    pub fn from_fn(
        field: &F,
        alg_dims: &[usize],
        lo: i64,
        dims: &[usize],
        mut f: impl FnMut(usize, usize, i64) -> Matrix<F>,
    ) -> Result<Self> {
        let cells = Self::empty_cells(alg_dims, dims.len());
        for (i, per_a) in cells.iter().enumerate() {
            for (a, per_n) in per_a.iter().enumerate() {
                for (k, cell) in per_n.iter().enumerate() {
                    let n = lo + k as i64;
                    let m = f(i, a, n);
                    if m.rows() != Self::dim_at(dims, lo, n + i as i64) || m.cols() != dims[k] || m.field() != field {
                        return Err(Error::InvalidStructure(format!(
                            "action of basis {a} in degree {i} on degree {n} has shape {}x{}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                    let _ = cell.set(m);
                }
            }
        }
        Ok(ActionTable { field: field.clone(), lo, dims: dims.to_vec(), cells: Arc::new(cells), source: None })
    }

    /// A table whose cells are computed on demand.
    pub fn lazy(field: &F, alg_dims: &[usize], lo: i64, dims: &[usize], f: ActionFn<F>) -> Self {
        let cells = Self::empty_cells(alg_dims, dims.len());
        ActionTable { field: field.clone(), lo, dims: dims.to_vec(), cells: Arc::new(cells), source: Some(f) }
    }

    fn shape(&self) -> Vec<usize> {
        self.cells.iter().map(|v| v.len()).collect()
    }

    fn get(&self, i: usize, a: usize, n: i64) -> Option<&Matrix<F>> {
        let k = n - self.lo;
        if k < 0 {
            return None;
        }
        let cell = self.cells.get(i)?.get(a)?.get(k as usize)?;
        Some(cell.get_or_init(|| {
            let m = (self.source.as_ref().expect("eager tables are filled"))(i, a, n);
            debug_assert_eq!((m.rows(), m.cols()), (Self::dim_at(&self.dims, self.lo, n + i as i64), Self::dim_at(&self.dims, self.lo, n)));
            m
        }))
    }

    /// Overwrites one structure constant: entry `(row, col)` of the action of
    /// basis `a` of degree `i` on degree `n`.
    pub fn set_entry(&mut self, i: usize, a: usize, n: i64, row: usize, col: usize, value: F::Elem) {
        let m = self.get(i, a, n).expect("cell in range").clone();
        let mut forced = Self::empty_cells(&self.shape(), self.dims.len());
        for (i2, per_a) in forced.iter_mut().enumerate() {
            for (a2, per_n) in per_a.iter_mut().enumerate() {
                for (k, cell) in per_n.iter_mut().enumerate() {
                    let _ = cell.set(self.get(i2, a2, self.lo + k as i64).unwrap().clone());
                }
            }
        }
        let mut cols = m.columns().to_vec();
        cols[col].retain(|e| e.0 != row);
        cols[col].push((row, value));
        let k = (n - self.lo) as usize;
        forced[i][a][k] = OnceLock::from(Matrix::from_columns(&self.field, m.rows(), cols));
        self.cells = Arc::new(forced);
        self.source = None;
    }

    /// `(i, a, n, rows, cols)` for every cell.
    pub fn shapes(&self) -> Vec<(usize, usize, i64, usize, usize)> {
        let mut out = Vec::new();
        for (i, per_a) in self.cells.iter().enumerate() {
            for a in 0..per_a.len() {
                for (k, &d) in self.dims.iter().enumerate() {
                    let n = self.lo + k as i64;
                    out.push((i, a, n, Self::dim_at(&self.dims, self.lo, n + i as i64), d));
                }
            }
        }
        out
    }

    pub fn get_entry(&self, i: usize, a: usize, n: i64, row: usize, col: usize) -> Option<F::Elem> {
        self.get(i, a, n).map(|m| m.get(row, col))
    }
}

/// Certificate that `H_0(A)` is local: a codimension-one nilpotent ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityCertificate<F: Field> {
    /// Vectors of `A_0` whose classes span the maximal ideal of `H_0(A)`.
    pub ideal: Vec<SparseVec<F::Elem>>,
    pub exponent: usize,
}

/// A finite-dimensional, non-negatively graded, graded-commutative DG algebra.
#[derive(Clone, Debug)]
pub struct DGAlgebra<F: Field> {
    complex: DGComplex<F>,
    mult: ActionTable<F>,
    unit: SparseVec<F::Elem>,
    locality: Option<LocalityCertificate<F>>,
}

impl<F: Field> PartialEq for DGAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex && self.mult == other.mult && self.unit == other.unit
    }
}

impl<F: Field> DGAlgebra<F> {
    /// `mult(i, a, j)` is left multiplication by basis element `a` of `A_i` on `A_j`.
    pub fn new(
        complex: DGComplex<F>,
        mult: impl FnMut(usize, usize, i64) -> Matrix<F>,
        unit: SparseVec<F::Elem>,
        locality: Option<LocalityCertificate<F>>,
    ) -> Result<Self> {
        let complex = if complex.is_zero() { complex } else { complex.with_support(0, complex.hi().max(0)) };
        if complex.lo() != 0 {
            return Err(Error::InvalidStructure("algebra must be supported in degrees >= 0".into()));
        }
        let mult = ActionTable::from_fn(complex.field(), complex.dims(), 0, complex.dims(), mult)?;
        if unit.iter().any(|(k, _)| *k >= complex.dim(0)) {
            return Err(Error::InvalidStructure("unit outside A_0".into()));
        }
        Ok(DGAlgebra { complex, mult, unit, locality })
    }

    /// Builds an algebra whose complex is negatively supported; used only to
    /// exercise the grading check of the validator.
    #[doc(hidden)]
    pub fn new_unchecked(complex: DGComplex<F>, mult: ActionTable<F>, unit: SparseVec<F::Elem>) -> Self {
        DGAlgebra { complex, mult, unit, locality: None }
    }

    pub fn field(&self) -> &F {
        self.complex.field()
    }
    pub fn complex(&self) -> &DGComplex<F> {
        &self.complex
    }
    pub fn dim(&self, i: i64) -> usize {
        self.complex.dim(i)
    }
    /// Top degree.
    pub fn top(&self) -> i64 {
        self.complex.hi()
    }
    pub fn unit(&self) -> &SparseVec<F::Elem> {
        &self.unit
    }
    pub fn locality(&self) -> Option<&LocalityCertificate<F>> {
        self.locality.as_ref()
    }
    pub fn with_locality(mut self, cert: Option<LocalityCertificate<F>>) -> Self {
        self.locality = cert;
        self
    }
    /// Same multiplication with a replaced complex of identical dimensions.
    pub fn with_complex(&self, complex: DGComplex<F>) -> Result<Self> {
        if complex.lo() != self.complex.lo() || complex.dims() != self.complex.dims() {
            return Err(Error::Dimension("replacement complex has different dimensions".into()));
        }
        Ok(DGAlgebra { complex, ..self.clone() })
    }
    pub fn mult_table(&self) -> &ActionTable<F> {
        &self.mult
    }
    pub fn mult_table_mut(&mut self) -> &mut ActionTable<F> {
        &mut self.mult
    }

    /// Left multiplication by basis element `a` of `A_i` on `A_j`.
    pub fn left(&self, i: usize, a: usize, j: i64) -> Cow<'_, Matrix<F>> {
        match self.mult.get(i, a, j) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(Matrix::zero(self.field(), self.dim(j + i as i64), self.dim(j))),
        }
    }

    /// Product of `u ∈ A_i` and `v ∈ A_j`.
    pub fn mul(&self, i: usize, u: &[(usize, F::Elem)], j: usize, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = self.field();
        let mut acc = Vec::new();
        for (a, c) in u {
            let w = self.left(i, *a, j as i64).mul_vec(v);
            acc = axpy(f, &acc, c, &w);
        }
        acc
    }

    /// The image of `∂ : A_1 -> A_0`.
    pub fn boundaries0(&self) -> Vec<SparseVec<F::Elem>> {
        if self.top() < 1 {
            return Vec::new();
        }
        self.complex.d(1).image_basis().into_columns()
    }

    /// Vectors of `A_0` spanning the preimage of the maximal ideal of `H_0(A)`.
    pub fn maximal_ideal(&self) -> Result<Vec<SparseVec<F::Elem>>> {
        let cert = self.locality.as_ref().ok_or(Error::MissingCertificate)?;
        let mut out = cert.ideal.clone();
        out.extend(self.boundaries0());
        Ok(out)
    }

    /// Lifts of a basis of `m / m²` in `H_0(A)`. Together with `∂A_1` these
    /// generate the maximal ideal of `A_0`; elements of `∂A_1` act on homology
    /// by zero, so they are left out.
    pub fn ideal_generators(&self) -> Result<Vec<SparseVec<F::Elem>>> {
        let cert = self.locality.as_ref().ok_or(Error::MissingCertificate)?;
        let f = self.field();
        let n0 = self.dim(0);
        let b0 = self.boundaries0();
        let mut ech = Echelon::new(f.clone(), n0);
        for b in &b0 {
            ech.insert(b.clone());
        }
        for u in &cert.ideal {
            for v in &cert.ideal {
                ech.insert(self.mul(0, u, 0, v));
            }
        }
        let mut gens: Vec<SparseVec<F::Elem>> = Vec::new();
        for u in &cert.ideal {
            if ech.insert(u.clone()) {
                gens.push(u.clone());
            }
        }
        Ok(gens)
    }
}

/// A DG module over a DG algebra.
#[derive(Clone, Debug)]
pub struct DGModule<F: Field> {
    algebra: Arc<DGAlgebra<F>>,
    complex: DGComplex<F>,
    action: ActionTable<F>,
}

impl<F: Field> PartialEq for DGModule<F> {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.complex == other.complex && self.action == other.action
    }
}

impl<F: Field> DGModule<F> {
    /// `action(i, a, n)` is the action of basis element `a` of `A_i` on `M_n`.
    pub fn new(algebra: Arc<DGAlgebra<F>>, complex: DGComplex<F>, action: impl FnMut(usize, usize, i64) -> Matrix<F>) -> Result<Self> {
        if algebra.field() != complex.field() {
            return Err(Error::FieldMismatch(algebra.field().spec(), complex.field().spec()));
        }
        let action = ActionTable::from_fn(complex.field(), algebra.complex().dims(), complex.lo(), complex.dims(), action)?;
        Ok(DGModule { algebra, complex, action })
    }

    /// A module whose action matrices are produced on demand.
    pub fn new_lazy(algebra: Arc<DGAlgebra<F>>, complex: DGComplex<F>, action: ActionFn<F>) -> Result<Self> {
        if algebra.field() != complex.field() {
            return Err(Error::FieldMismatch(algebra.field().spec(), complex.field().spec()));
        }
        let action = ActionTable::lazy(complex.field(), algebra.complex().dims(), complex.lo(), complex.dims(), action);
        Ok(DGModule { algebra, complex, action })
    }

    /// `A` as a module over itself.
    pub fn regular(algebra: Arc<DGAlgebra<F>>) -> Self {
        DGModule { complex: algebra.complex().clone(), action: algebra.mult_table().clone(), algebra }
    }

    /// The zero module.
    pub fn zero(algebra: Arc<DGAlgebra<F>>) -> Self {
        let z = DGComplex::zero(algebra.field());
        Self::new(algebra, z, |_, _, _| unreachable!()).unwrap()
    }

    pub fn algebra(&self) -> &Arc<DGAlgebra<F>> {
        &self.algebra
    }
    pub fn complex(&self) -> &DGComplex<F> {
        &self.complex
    }
    pub fn field(&self) -> &F {
        self.complex.field()
    }
    pub fn dim(&self, n: i64) -> usize {
        self.complex.dim(n)
    }
    pub fn lo(&self) -> i64 {
        self.complex.lo()
    }
    pub fn hi(&self) -> i64 {
        self.complex.hi()
    }
    pub fn action_mut(&mut self) -> &mut ActionTable<F> {
        &mut self.action
    }
    pub fn action_table(&self) -> &ActionTable<F> {
        &self.action
    }

    /// Same action with a replaced complex of identical dimensions.
    pub fn with_complex(&self, complex: DGComplex<F>) -> Result<Self> {
        if complex.lo() != self.lo() || complex.dims() != self.complex.dims() {
            return Err(Error::Dimension("replacement complex has different dimensions".into()));
        }
        Ok(DGModule { complex, ..self.clone() })
    }

    /// Same module viewed over an equal algebra object.
    pub fn rebased(&self, algebra: Arc<DGAlgebra<F>>) -> Self {
        debug_assert!(*algebra == *self.algebra);
        DGModule { algebra, ..self.clone() }
    }

    /// Action of basis element `a` of `A_i` on `M_n`.
    pub fn act(&self, i: usize, a: usize, n: i64) -> Cow<'_, Matrix<F>> {
        match self.action.get(i, a, n) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(Matrix::zero(self.field(), self.dim(n + i as i64), self.dim(n))),
        }
    }

    /// Action of an element `u ∈ A_i` on a vector of `M_n`.
    pub fn act_elem(&self, i: usize, u: &[(usize, F::Elem)], n: i64, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = self.field();
        let mut acc = Vec::new();
        for (a, c) in u {
            if let Some(m) = self.action.get(i, *a, n) {
                acc = axpy(f, &acc, c, &m.mul_vec(v));
            }
        }
        acc
    }

    /// Matrix of the action of `u ∈ A_i` on `M_n`.
    pub fn act_elem_matrix(&self, i: usize, u: &[(usize, F::Elem)], n: i64) -> Matrix<F> {
        let f = self.field();
        let mut out = Matrix::zero(f, self.dim(n + i as i64), self.dim(n));
        for (a, c) in u {
            if let Some(m) = self.action.get(i, *a, n) {
                out = out.add(&m.scaled(c)).unwrap();
            }
        }
        out
    }
}

fn fail(check: &str, axiom: &str, detail: String) -> VerdictReport {
    VerdictReport::fails(check, format!("{axiom}: {detail}")).with_param("axiom", axiom)
}

/// Checks every DG algebra axiom on basis elements.
pub fn validate_dg_algebra<F: Field>(a: &DGAlgebra<F>) -> VerdictReport {
    const CHECK: &str = "validate_dg_algebra";
    let f = a.field();
    let cx = a.complex();
    if cx.lo() < 0 && (cx.lo()..0).any(|n| cx.dim(n) > 0) {
        return fail(CHECK, "positive grading", format!("nonzero piece in degree {}", cx.lo()));
    }
    let c = validate_complex(cx);
    if !c.is_holds() {
        return fail(CHECK, "differential", c.reason.unwrap_or_default());
    }
    let top = a.top().max(0) as usize;
    let dims: Vec<usize> = (0..=top).map(|i| a.dim(i as i64)).collect();
    let basis = |_degree: usize, b: usize| -> SparseVec<F::Elem> { vec![(b, f.one())] };
    let unit = a.unit();
    if a.dim(0) == 0 {
        if a.complex().total_dim() > 0 {
            return fail(CHECK, "unitality", "no degree-zero part".into());
        }
        return VerdictReport::holds(CHECK);
    }
    for i in 0..=top {
        for x in 0..dims[i] {
            let e = basis(i, x);
            if a.mul(0, unit, i, &e) != e || a.mul(i, &e, 0, unit) != e {
                return fail(CHECK, "unitality", format!("1·e != e for basis {x} of degree {i}"));
            }
        }
    }
    for i in 0..=top {
        for j in 0..=top {
            for x in 0..dims[i] {
                for y in 0..dims[j] {
                    let ab = a.mul(i, &basis(i, x), j, &basis(j, y));
                    let ba = a.mul(j, &basis(j, y), i, &basis(i, x));
                    if ab != crate::linalg::scale(f, &ba, &f.sign((i * j) as i64)) {
                        return fail(CHECK, "graded commutativity", format!("basis ({i},{x}) and ({j},{y})"))
                            .with_param("basis", format!("({i},{x}),({j},{y})"));
                    }
                }
            }
        }
    }
    for i in (1..=top).step_by(2) {
        for x in 0..dims[i] {
            if !a.mul(i, &basis(i, x), i, &basis(i, x)).is_empty() {
                return fail(CHECK, "odd square", format!("basis ({i},{x}) squares to nonzero")).with_param("basis", format!("({i},{x})"));
            }
        }
    }
    for i in 0..=top {
        for j in 0..=top {
            for k in 0..=top {
                if i + j + k > top {
                    continue;
                }
                for x in 0..dims[i] {
                    for y in 0..dims[j] {
                        let xy = a.mul(i, &basis(i, x), j, &basis(j, y));
                        for z in 0..dims[k] {
                            let yz = a.mul(j, &basis(j, y), k, &basis(k, z));
                            if a.mul(i + j, &xy, k, &basis(k, z)) != a.mul(i, &basis(i, x), j + k, &yz) {
                                return fail(CHECK, "associativity", format!("basis ({i},{x}), ({j},{y}), ({k},{z})"))
                                    .with_param("basis", format!("({i},{x}),({j},{y}),({k},{z})"));
                            }
                        }
                    }
                }
            }
        }
    }
    for i in 0..=top {
        for j in 0..=top {
            if i + j == 0 || i + j > top {
                continue;
            }
            for x in 0..dims[i] {
                for y in 0..dims[j] {
                    let (u, v) = (basis(i, x), basis(j, y));
                    let lhs = cx.d((i + j) as i64).mul_vec(&a.mul(i, &u, j, &v));
                    let mut rhs = Vec::new();
                    if i > 0 {
                        rhs = a.mul(i - 1, cx.d(i as i64).column(x), j, &v);
                    }
                    if j > 0 {
                        let t = a.mul(i, &u, j - 1, cx.d(j as i64).column(y));
                        rhs = axpy(f, &rhs, &f.sign(i as i64), &t);
                    }
                    if lhs != rhs {
                        return fail(CHECK, "leibniz", format!("basis ({i},{x}) and ({j},{y})")).with_param("basis", format!("({i},{x}),({j},{y})"));
                    }
                }
            }
        }
    }
    VerdictReport::holds(CHECK)
}

/// Checks the DG module axioms on basis elements.
pub fn validate_dg_module<F: Field>(m: &DGModule<F>) -> VerdictReport {
    const CHECK: &str = "validate_dg_module";
    let a = m.algebra();
    let f = m.field();
    let c = validate_complex(m.complex());
    if !c.is_holds() {
        return fail(CHECK, "differential", c.reason.unwrap_or_default());
    }
    let top = a.top().max(-1);
    let (lo, hi) = (m.lo(), m.hi());
    for n in lo..=hi {
        let u = m.act_elem_matrix(0, a.unit(), n);
        if u != Matrix::identity(f, m.dim(n)) {
            return fail(CHECK, "unitality", format!("1 does not act as the identity on degree {n}")).with_param("degree", n);
        }
    }
    for i in 0..=top {
        for x in 0..a.dim(i) {
            for j in 0..=top {
                if i + j > top {
                    continue;
                }
                for y in 0..a.dim(j) {
                    let xy = a.mul(i as usize, &[(x, f.one())], j as usize, &[(y, f.one())]);
                    for n in lo..=hi {
                        let lhs = m.act(i as usize, x, n + j).mul(&m.act(j as usize, y, n)).unwrap();
                        let rhs = m.act_elem_matrix((i + j) as usize, &xy, n);
                        if lhs != rhs {
                            return fail(CHECK, "associativity", format!("basis ({i},{x}), ({j},{y}) on degree {n}"))
                                .with_param("basis", format!("({i},{x}),({j},{y})"))
                                .with_param("degree", n);
                        }
                    }
                }
            }
        }
    }
    let dm = m.complex();
    for i in 0..=top {
        for x in 0..a.dim(i) {
            for n in lo..=hi {
                let lhs = dm.d(n + i).mul(&m.act(i as usize, x, n)).unwrap();
                let mut rhs = m.act(i as usize, x, n - 1).mul(&dm.d(n)).unwrap().scaled(&f.sign(i));
                if i > 0 {
                    let da = a.complex().d(i).column(x).clone();
                    rhs = rhs.add(&m.act_elem_matrix((i - 1) as usize, &da, n)).unwrap();
                }
                if lhs != rhs {
                    return fail(CHECK, "leibniz", format!("basis ({i},{x}) on degree {n}"))
                        .with_param("basis", format!("({i},{x})"))
                        .with_param("degree", n);
                }
            }
        }
    }
    VerdictReport::holds(CHECK)
}

/// Checks the locality certificate: an ideal of codimension one in `H_0(A)`
/// whose `e`-th power vanishes.
pub fn validate_locality<F: Field>(a: &DGAlgebra<F>) -> VerdictReport {
    const CHECK: &str = "validate_locality";
    let Some(cert) = a.locality() else {
        return VerdictReport::inconclusive(CHECK, "no locality certificate supplied");
    };
    let f = a.field();
    let n0 = a.dim(0);
    let b0 = a.boundaries0();
    let span = |vs: &[SparseVec<F::Elem>]| {
        let mut e = Echelon::new(f.clone(), n0);
        for b in &b0 {
            e.insert(b.clone());
        }
        for v in vs {
            e.insert(v.clone());
        }
        e
    };
    if cert.ideal.iter().any(|v| v.iter().any(|(k, _)| *k >= n0)) {
        return fail(CHECK, "ideal", "certificate vector outside A_0".into());
    }
    let ideal = span(&cert.ideal);
    let h0 = n0 - b0.len();
    if ideal.rank() + 1 != n0 {
        return fail(CHECK, "codimension", format!("ideal has dimension {} in H_0 of dimension {h0}", ideal.rank() - b0.len()));
    }
    for b in 0..n0 {
        for u in &cert.ideal {
            if !ideal.contains(&a.mul(0, &[(b, f.one())], 0, u)) {
                return fail(CHECK, "ideal", format!("basis {b} times a certificate vector leaves the span"));
            }
        }
    }
    let mut power = cert.ideal.clone();
    for _ in 1..cert.exponent.max(1) {
        let mut next = Vec::new();
        for u in &cert.ideal {
            for v in &power {
                next.push(a.mul(0, u, 0, v));
            }
        }
        let ech = span(&next);
        power = ech.rows().to_vec();
    }
    let zero = span(&[]);
    if cert.exponent == 0 || power.iter().any(|v| !zero.contains(v)) {
        return fail(CHECK, "nilpotency", format!("ideal to the power {} is nonzero", cert.exponent));
    }
    VerdictReport::holds(CHECK).with_param("exponent", cert.exponent)
}

/// Homology bounds and per-degree minimal generator counts of `H(M)` over `H_0(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologicalBounds {
    pub inf: Option<i64>,
    pub sup: Option<i64>,
    /// Minimal generator counts when a certificate is present, dimensions otherwise.
    pub generators: BTreeMap<i64, usize>,
    pub minimal_counts: bool,
}

pub fn homological_bounds<F: Field>(m: &DGModule<F>) -> HomologicalBounds {
    let cx = m.complex();
    let hb = cx.homology_bounds();
    let ideal = m.algebra().ideal_generators().ok();
    let mut generators = BTreeMap::new();
    if let Some((lo, hi)) = hb {
        for n in lo..=hi {
            let h = cx.homology_dim(n);
            if h == 0 {
                continue;
            }
            let count = match &ideal {
                Some(gens) => minimal_generator_count(m, n, gens),
                None => h,
            };
            generators.insert(n, count);
        }
    }
    HomologicalBounds { inf: hb.map(|b| b.0), sup: hb.map(|b| b.1), generators, minimal_counts: ideal.is_some() }
}

/// `dim H_n / m H_n` for the given generators of `m` inside `A_0`.
pub fn minimal_generator_count<F: Field>(m: &DGModule<F>, n: i64, gens: &[SparseVec<F::Elem>]) -> usize {
    let cx = m.complex();
    let z = cx.d(n).kernel_basis();
    let mut ech = Echelon::new(m.field().clone(), m.dim(n));
    for b in cx.d(n + 1).image_basis().columns() {
        ech.insert(b.clone());
    }
    for g in gens {
        let act = m.act_elem_matrix(0, g, n);
        for v in z.columns() {
            ech.insert(act.mul_vec(v));
        }
    }
    z.cols() - ech.rank()
}

/// Which validators hold for an algebra and a list of modules over it.
pub fn validate_all<F: Field>(a: &DGAlgebra<F>, modules: &[&DGModule<F>]) -> Vec<VerdictReport> {
    let mut out = vec![validate_dg_algebra(a)];
    if a.locality().is_some() {
        out.push(validate_locality(a));
    }
    for m in modules {
        out.push(validate_dg_module(m));
    }
    out
}

/// `Verdict` of a list of reports taken together.
pub fn combined(reports: &[VerdictReport]) -> Verdict {
    reports.iter().fold(Verdict::Holds, |v, r| v.and(r.verdict))
}
