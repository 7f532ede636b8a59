//! Semifree resolutions by cycle killing, truncated at a degree bound, and the
//! windows on which truncated computations are exact.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use crate::complex::{is_quasi_iso_on, validate_complex, ChainMap, HomologyDegree, TensorLayout};
use crate::constructions::{hom_complex, DGMorphism};
use crate::dg::{DGAlgebra, DGModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::semifree::{tensor_semifree_upto, SemifreeModule, Term};
use crate::verdict::{TrustWindow, VerdictReport};

/// A semifree module `F` with a map `ε : F -> M` that is a quasi-isomorphism
/// in degrees `<= bound - 1`; basis elements live in degrees `<= bound`.
#[derive(Clone, Debug)]
pub struct SemifreeResolution<F: Field> {
    module: SemifreeModule<F>,
    target: DGModule<F>,
    epsilon: Vec<SparseVec<F::Elem>>,
    bound: i64,
    minimal: bool,
}

/// Order in which candidate cycles are scanned when choosing new basis elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeneratorOrder {
    #[default]
    Forward,
    Reverse,
}

fn augmentation_matrix<F: Field>(f: &SemifreeModule<F>, m: &DGModule<F>, eps: &[SparseVec<F::Elem>], n: i64) -> Matrix<F> {
    let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(f.dim(n));
    for k in f.gens_in(n) {
        let i = n - f.degree(k);
        for a in 0..f.algebra().dim(i) {
            cols.push(if eps[k].is_empty() { Vec::new() } else { m.act(i as usize, a, f.degree(k)).mul_vec(&eps[k]) });
        }
    }
    Matrix::from_columns(m.field(), m.dim(n), cols)
}

fn stack<F: Field>(field: &F, top: &SparseVec<F::Elem>, bottom: &SparseVec<F::Elem>, split: usize) -> SparseVec<F::Elem> {
    let mut v = top.clone();
    v.extend(bottom.iter().map(|(i, x)| (i + split, x.clone())));
    let _ = field;
    v
}

impl<F: Field> SemifreeResolution<F> {
    /// Assembles a resolution from its parts without checking anything.
    pub fn from_parts(module: SemifreeModule<F>, target: DGModule<F>, epsilon: Vec<SparseVec<F::Elem>>, bound: i64, minimal: bool) -> Self {
        SemifreeResolution { module, target, epsilon, bound, minimal }
    }

    pub fn semifree(&self) -> &SemifreeModule<F> {
        &self.module
    }
    pub fn target(&self) -> &DGModule<F> {
        &self.target
    }
    pub fn algebra(&self) -> &Arc<DGAlgebra<F>> {
        self.module.algebra()
    }
    pub fn bound(&self) -> i64 {
        self.bound
    }
    pub fn minimal(&self) -> bool {
        self.minimal
    }
    /// `ε(e_k)`.
    pub fn epsilon(&self, k: usize) -> &SparseVec<F::Elem> {
        &self.epsilon[k]
    }
    pub fn epsilons(&self) -> &[SparseVec<F::Elem>] {
        &self.epsilon
    }

    /// Number of basis elements per degree, from the lowest basis degree through the bound.
    pub fn basis_counts(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let Some(&lo) = self.module.degrees().first() else { return out };
        for n in lo..=self.bound {
            out.insert(n, 0);
        }
        for &d in self.module.degrees() {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    pub fn augmentation(&self) -> ChainMap<F> {
        let src = self.module.module().complex().clone();
        ChainMap::from_fn(src, self.target.complex().clone(), 0, |n| augmentation_matrix(&self.module, &self.target, &self.epsilon, n))
            .expect("augmentation components have matching shapes")
    }

    pub fn augmentation_morphism(&self) -> DGMorphism<F> {
        DGMorphism::new(self.module.module().clone(), self.target.clone(), self.augmentation()).expect("shapes match")
    }

    /// Same resolution with the augmentation replaced.
    pub fn with_epsilon(&self, epsilon: Vec<SparseVec<F::Elem>>) -> Self {
        SemifreeResolution { epsilon, ..self.clone() }
    }
}

/// Resolves `m` through basis degree `d`, choosing minimal generators when the
/// algebra carries a locality certificate.
pub fn semifree_resolution<F: Field>(m: &DGModule<F>, d: i64) -> Result<SemifreeResolution<F>> {
    semifree_resolution_with(m, d, GeneratorOrder::Forward)
}

pub fn semifree_resolution_with<F: Field>(m: &DGModule<F>, d: i64, order: GeneratorOrder) -> Result<SemifreeResolution<F>> {
    let a = m.algebra().clone();
    let field = m.field().clone();
    let ideal = a.ideal_generators().ok();
    let mut degrees: Vec<i64> = Vec::new();
    let mut diffs: Vec<Vec<Term<F::Elem>>> = Vec::new();
    let mut eps: Vec<SparseVec<F::Elem>> = Vec::new();
    let start = if m.complex().is_zero() { d + 1 } else { m.lo() };
    for j in start..=d {
        let f = SemifreeModule::new(a.clone(), degrees.clone(), diffs.clone())?;
        let (nf2, nf1, nf0) = (f.dim(j - 2), f.dim(j - 1), f.dim(j));
        let (nm1, nm0, nm_up) = (m.dim(j - 1), m.dim(j), m.dim(j + 1));
        if nf1 + nm0 == 0 {
            continue;
        }
        // cone in degree j-1: F_{j-1} ⊕ M_j, differential (f, x) ↦ (∂f, εf - ∂x)
        let df = f.d_matrix(j - 1);
        let ef = augmentation_matrix(&f, m, &eps, j - 1);
        let dm = m.complex().d(j);
        let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(nf1 + nm0);
        for c in 0..nf1 {
            cols.push(stack(&field, df.column(c), ef.column(c), nf2));
        }
        for c in 0..nm0 {
            let neg: SparseVec<F::Elem> = dm.column(c).iter().map(|(i, x)| (i + nf2, field.neg(x))).collect();
            cols.push(neg);
        }
        let phi = Matrix::from_columns(&field, nf2 + nm1, cols);
        let z = phi.kernel_basis();
        if z.cols() == 0 {
            continue;
        }
        let mut ech = Echelon::new(field.clone(), nf1 + nm0);
        let dfj = f.d_matrix(j);
        let efj = augmentation_matrix(&f, m, &eps, j);
        for c in 0..nf0 {
            ech.insert(stack(&field, dfj.column(c), efj.column(c), nf1));
        }
        let dmu = m.complex().d(j + 1);
        for c in 0..nm_up {
            ech.insert(dmu.column(c).iter().map(|(i, x)| (i + nf1, x.clone())).collect());
        }
        if let Some(gens) = &ideal {
            for g in gens {
                let mut af = Matrix::zero(&field, nf1, nf1);
                for (b, c) in g {
                    af = af.add(&f.action_matrix(0, *b, j - 1).scaled(c)).unwrap();
                }
                let am = m.act_elem_matrix(0, g, j);
                for v in z.columns() {
                    let (top, bottom): (SparseVec<F::Elem>, SparseVec<F::Elem>) = (
                        v.iter().filter(|(i, _)| *i < nf1).cloned().collect(),
                        v.iter().filter(|(i, _)| *i >= nf1).map(|(i, x)| (i - nf1, x.clone())).collect(),
                    );
                    ech.insert(stack(&field, &af.mul_vec(&top), &am.mul_vec(&bottom), nf1));
                }
            }
        }
        let candidates: Vec<&SparseVec<F::Elem>> = match order {
            GeneratorOrder::Forward => z.columns().iter().collect(),
            GeneratorOrder::Reverse => z.columns().iter().rev().collect(),
        };
        for v in candidates {
            if ech.insert(v.clone()) {
                let top: SparseVec<F::Elem> = v.iter().filter(|(i, _)| *i < nf1).cloned().collect();
                let bottom: SparseVec<F::Elem> = v.iter().filter(|(i, _)| *i >= nf1).map(|(i, x)| (i - nf1, x.clone())).collect();
                degrees.push(j);
                diffs.push(f.terms_of(j - 1, &top));
                eps.push(bottom);
            }
        }
    }
    let module = SemifreeModule::new(a, degrees, diffs)?;
    Ok(SemifreeResolution { module, target: m.clone(), epsilon: eps, bound: d, minimal: ideal.is_some() })
}

/// Filtration condition, `∂² = 0`, the augmentation chain-map equation, and
/// the quasi-isomorphism property in degrees `<= bound - 1`.
pub fn verify_semifree<F: Field>(f: &SemifreeResolution<F>) -> VerdictReport {
    const CHECK: &str = "verify_semifree";
    let window = TrustWindow::at_most(f.bound - 1);
    let fail = |axiom: &str, msg: String| VerdictReport::fails(CHECK, msg).with_param("axiom", axiom).with_window(window);
    if let Some((k, t)) = f.module.filtration_defect() {
        return fail("filtration", format!("term {t} of the differential of basis element {k} is not of lower degree"));
    }
    if f.epsilon.len() != f.module.rank() {
        return fail("augmentation", "one augmentation value per basis element is required".into());
    }
    let cx = f.module.module().complex();
    let r = validate_complex(cx);
    if !r.is_holds() {
        return fail("differential", r.reason.unwrap_or_default());
    }
    let aug = f.augmentation();
    if let Some(n) = aug.chain_defect() {
        return fail("augmentation", format!("augmentation is not a chain map at degree {n}"));
    }
    match is_quasi_iso_on(&aug, &window) {
        Ok(rep) if rep.is_holds() => VerdictReport::holds(CHECK).with_window(window).with_part(rep),
        Ok(rep) => fail("quasi-isomorphism", rep.reason.clone().unwrap_or_default()).with_part(rep),
        Err(e) => fail("quasi-isomorphism", e.to_string()),
    }
}

/// Whether every differential coefficient lies in the maximal ideal.
pub fn is_minimal<F: Field>(f: &SemifreeResolution<F>) -> VerdictReport {
    const CHECK: &str = "is_minimal";
    let a = f.algebra();
    let Ok(ideal) = a.maximal_ideal() else {
        return VerdictReport::inconclusive(CHECK, "no locality certificate");
    };
    let field = a.field();
    let mut ech = Echelon::new(field.clone(), a.dim(0));
    for v in ideal {
        ech.insert(v);
    }
    let p = &f.module;
    for k in 0..p.rank() {
        let mut by_gen: BTreeMap<usize, SparseVec<F::Elem>> = BTreeMap::new();
        for t in p.diff(k) {
            if p.term_degree(k, t) == 0 {
                let e = by_gen.entry(t.gen).or_default();
                *e = crate::linalg::axpy(field, e, &t.coeff, &[(t.alg, field.one())]);
            }
        }
        for (j, coeff) in by_gen {
            if !ech.contains(&coeff) {
                return VerdictReport::fails(CHECK, format!("coefficient of basis element {j} in the differential of {k} is a unit"))
                    .with_param("basis", k);
            }
        }
    }
    VerdictReport::holds(CHECK)
}

/// Basis counts per degree of a minimal resolution.
pub fn poincare_coefficients<F: Field>(f: &SemifreeResolution<F>) -> Result<Vec<usize>> {
    if !f.minimal || !is_minimal(f).is_holds() {
        return Err(Error::Precondition("Poincaré coefficients need a minimal resolution".into()));
    }
    Ok(f.basis_counts().into_values().collect())
}

/// Keeps basis elements of degree `<= d`.
pub fn truncate_resolution<F: Field>(f: &SemifreeResolution<F>, d: i64) -> SemifreeResolution<F> {
    let d = d.min(f.bound);
    let module = f.module.truncate(d);
    let epsilon = f.epsilon[..module.rank()].to_vec();
    SemifreeResolution { module, target: f.target.clone(), epsilon, bound: d, minimal: f.minimal }
}

/// Degrees where `H(Hom_A(F(d), Q))` is exact, for `Q` with `sup H(Q) = sup`.
pub fn window_hom(d: i64, sup: i64) -> TrustWindow {
    TrustWindow::at_least(sup - d + 1)
}

/// Degrees where `H(F(d) ⊗_A M)` is exact, for `M` with `inf H(M) = inf`.
pub fn window_tensor(d: i64, inf: i64) -> TrustWindow {
    TrustWindow::at_most(d + inf - 1)
}

/// The tensor product of two resolutions, a resolution of `target = M' ⊗ M''`
/// over `A' ⊗ A''`, truncated at `d`. Exact in degrees `<= d - 1` as long as
/// `d <= bound' + inf H(M'')` and `d <= bound'' + inf H(M')`.
pub fn tensor_resolutions<F: Field>(
    r1: &SemifreeResolution<F>,
    r2: &SemifreeResolution<F>,
    target: &DGModule<F>,
    d: i64,
) -> Result<SemifreeResolution<F>> {
    let field = target.field().clone();
    let (p, pos) = tensor_semifree_upto(target.algebra().clone(), &r1.module, &r2.module, d);
    let lay = TensorLayout::of(r1.target.complex(), r2.target.complex());
    if lay.dims != target.complex().dims() && !target.complex().is_zero() {
        return Err(Error::Dimension("target is not the tensor product of the resolved modules".into()));
    }
    let mut epsilon = vec![Vec::new(); p.rank()];
    for k1 in 0..r1.module.rank() {
        for k2 in 0..r2.module.rank() {
            let (d1, d2) = (r1.module.degree(k1), r2.module.degree(k2));
            let mut v = Vec::new();
            for (i, x) in &r1.epsilon[k1] {
                for (j, y) in &r2.epsilon[k2] {
                    v.push((lay.index(d1, *i, d2, *j), field.mul(x, y)));
                }
            }
            if pos[k1][k2] != usize::MAX {
                epsilon[pos[k1][k2]] = crate::linalg::collect_sparse(&field, v);
            }
        }
    }
    let full = SemifreeResolution { module: p, target: target.clone(), epsilon, bound: i64::MAX, minimal: r1.minimal && r2.minimal };
    Ok(truncate_resolution(&full, d))
}

/// A degree-0 chain map `P -> Y` inducing `bottom` on `H_b`, where `bottom` is
/// written in the homology bases of [`HomologyDegree`]. `None` when no such
/// map exists.
pub fn lift_morphism<F: Field>(p: &SemifreeModule<F>, y: &DGModule<F>, b: i64, bottom: &Matrix<F>) -> Result<Option<ChainMap<F>>> {
    let hom = hom_complex(p, y)?;
    let field = y.field().clone();
    let hp = HomologyDegree::compute(p.module().complex(), b);
    let hy = HomologyDegree::compute(y.complex(), b);
    if bottom.cols() != hp.dim || bottom.rows() != hy.dim {
        return Err(Error::Dimension(format!("bottom map must be {}x{}", hy.dim, hp.dim)));
    }
    let n0 = hom.complex().dim(0);
    let nm1 = hom.complex().dim(-1);
    let yb = y.dim(b);
    let yb1 = y.dim(b + 1);
    let r = hp.dim;
    // unknowns: φ ∈ Hom_0, then w_i ∈ Y_{b+1} for each homology class
    let d0 = hom.complex().d(0);
    let dy = y.complex().d(b + 1);
    let evals: Vec<Matrix<F>> = hp.reps.columns().iter().map(|z| hom.evaluation_at(0, b, z)).collect();
    let rows = nm1 + r * yb;
    let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(n0 + r * yb1);
    for c in 0..n0 {
        let mut col: SparseVec<F::Elem> = d0.column(c).clone();
        for (i, e) in evals.iter().enumerate() {
            col.extend(e.column(c).iter().map(|(k, x)| (nm1 + i * yb + k, x.clone())));
        }
        cols.push(col);
    }
    for i in 0..r {
        for c in 0..yb1 {
            cols.push(dy.column(c).iter().map(|(k, x)| (nm1 + i * yb + k, field.neg(x))).collect());
        }
    }
    let system = Matrix::from_columns(&field, rows, cols);
    let mut rhs = Vec::new();
    for i in 0..r {
        let target = hy.reps.mul_vec(bottom.column(i));
        rhs.extend(target.into_iter().map(|(k, x)| (nm1 + i * yb + k, x)));
    }
    let Some(sol) = system.solve(&rhs) else { return Ok(None) };
    let phi: SparseVec<F::Elem> = sol.into_iter().filter(|(i, _)| *i < n0).collect();
    Ok(Some(hom.as_map(0, &phi)))
}

/// Structural hash of a module: dimensions, differentials and action matrices.
pub fn fingerprint<F: Field>(m: &DGModule<F>) -> u64 {
    let mut h = DefaultHasher::new();
    let a = m.algebra();
    a.complex().dims().hash(&mut h);
    let cx = m.complex();
    cx.lo().hash(&mut h);
    cx.dims().hash(&mut h);
    for n in cx.lo()..=cx.hi() {
        for t in cx.d(n).triplets() {
            t.hash(&mut h);
        }
    }
    for i in 0..=a.top().max(0) {
        for b in 0..a.dim(i) {
            for n in cx.lo()..=cx.hi() {
                for t in m.act(i as usize, b, n).triplets() {
                    (i, b, n, t).hash(&mut h);
                }
            }
        }
    }
    h.finish()
}

type VerdictKey = (String, Vec<u64>, i64);

/// Cache of resolutions and verdicts keyed by module fingerprints.
#[derive(Debug, Default)]
pub struct Workspace<F: Field> {
    resolutions: Mutex<HashMap<u64, Arc<SemifreeResolution<F>>>>,
    verdicts: Mutex<HashMap<VerdictKey, VerdictReport>>,
}

impl<F: Field> Workspace<F> {
    pub fn new() -> Self {
        Workspace { resolutions: Mutex::new(HashMap::new()), verdicts: Mutex::new(HashMap::new()) }
    }

    /// Runs `compute` once per check name, module list and bound.
    pub fn memo(&self, check: &str, modules: &[&DGModule<F>], d: i64, compute: impl FnOnce() -> Result<VerdictReport>) -> Result<VerdictReport> {
        let key = (check.to_string(), modules.iter().map(|m| fingerprint(m)).collect(), d);
        if let Some(r) = self.verdicts.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let r = compute()?;
        self.verdicts.lock().unwrap().insert(key, r.clone());
        Ok(r)
    }

    /// A resolution of `m` through degree `d`, reusing a deeper cached one when present.
    pub fn resolve(&self, m: &DGModule<F>, d: i64) -> Result<Arc<SemifreeResolution<F>>> {
        let key = fingerprint(m);
        if let Some(r) = self.resolutions.lock().unwrap().get(&key) {
            if r.bound == d {
                return Ok(r.clone());
            }
            if r.bound > d {
                return Ok(Arc::new(truncate_resolution(r, d)));
            }
        }
        let r = Arc::new(semifree_resolution(m, d)?);
        self.resolutions.lock().unwrap().insert(key, r.clone());
        Ok(r)
    }

    /// Records a resolution built elsewhere, e.g. a tensor product of resolutions.
    pub fn register(&self, m: &DGModule<F>, r: Arc<SemifreeResolution<F>>) {
        let key = fingerprint(m);
        let mut map = self.resolutions.lock().unwrap();
        match map.get(&key) {
            Some(old) if old.bound >= r.bound => {}
            _ => {
                map.insert(key, r);
            }
        }
    }

    /// Whether a resolution of `m` through at least degree `d` is cached.
    pub fn has(&self, m: &DGModule<F>, d: i64) -> bool {
        self.resolutions.lock().unwrap().get(&fingerprint(m)).is_some_and(|r| r.bound >= d)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_koszul, make_short_artinian, make_truncated_poly, residue_module, CatalogEntry};
    use crate::complex::is_quasi_iso;
    use crate::constructions::{evaluation_map, evaluation_through, tensor_algebras, tensor_modules_over, tensor_over_a, truncate_module_below};
    use crate::field::PrimeField;

    fn fp() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn t2() -> CatalogEntry<PrimeField> {
        make_truncated_poly(&fp(), 2).unwrap()
    }

    fn s3() -> CatalogEntry<PrimeField> {
        make_short_artinian(&fp())
    }

    fn counts(r: &SemifreeResolution<PrimeField>) -> Vec<usize> {
        r.basis_counts().into_values().collect()
    }

    #[test]
    fn regular_resolves_itself() {
        let t = t2();
        let r = semifree_resolution(t.select("R").unwrap(), 4).unwrap();
        assert_eq!(r.semifree().rank(), 1);
        assert!(r.minimal());
        assert!(verify_semifree(&r).is_holds());
        assert!(is_minimal(&r).is_holds());
        assert_eq!(poincare_coefficients(&r).unwrap()[0], 1);
    }

    #[test]
    fn residue_over_t2_is_periodic() {
        let t = t2();
        let r = semifree_resolution(t.select("k").unwrap(), 5).unwrap();
        assert_eq!(counts(&r), vec![1; 6]);
        for k in 1..6 {
            let d = r.semifree().diff(k);
            assert_eq!(d.len(), 1);
            assert_eq!((d[0].gen, d[0].alg), (k - 1, 1));
        }
        assert!(verify_semifree(&r).is_holds());
        assert!(is_minimal(&r).is_holds());
        assert_eq!(poincare_coefficients(&r).unwrap(), vec![1; 6]);
    }

    #[test]
    fn dualizing_over_s3() {
        let s = s3();
        let r = semifree_resolution(s.select("omega").unwrap(), 2).unwrap();
        assert_eq!(poincare_coefficients(&r).unwrap(), vec![2, 3, 6]);
        assert!(verify_semifree(&r).is_holds());
        let rev = semifree_resolution_with(s.select("omega").unwrap(), 3, GeneratorOrder::Reverse).unwrap();
        let fwd = semifree_resolution(s.select("omega").unwrap(), 3).unwrap();
        assert_eq!(poincare_coefficients(&rev).unwrap(), poincare_coefficients(&fwd).unwrap());
    }

    #[test]
    fn koszul_residue_resolution() {
        let k = make_koszul(&t2(), &vec![(1, 1)]).unwrap();
        let r = semifree_resolution(k.select("k").unwrap(), 4).unwrap();
        assert!(verify_semifree(&r).is_holds());
        assert!(is_minimal(&r).is_holds());
    }

    #[test]
    fn mutations_are_caught() {
        let t = t2();
        let r = semifree_resolution(t.select("k").unwrap(), 3).unwrap();
        let zero = r.with_epsilon(vec![Vec::new(); r.semifree().rank()]);
        let v = verify_semifree(&zero);
        assert_eq!(v.verdict, crate::Verdict::Fails);
        assert_eq!(v.parameters.get("axiom").map(String::as_str), Some("quasi-isomorphism"));

        // basis elements e, f in degree 0 and 1 with ∂f = e: an acyclic pair
        let p = r.semifree();
        let mut degrees = p.degrees().to_vec();
        let mut diffs: Vec<_> = (0..p.rank()).map(|k| p.diff(k).to_vec()).collect();
        degrees.insert(1, 0);
        for d in diffs.iter_mut() {
            for t in d.iter_mut() {
                if t.gen >= 1 {
                    t.gen += 1;
                }
            }
        }
        diffs.insert(1, vec![]);
        degrees.insert(3, 1);
        for d in diffs.iter_mut().skip(3) {
            for t in d.iter_mut() {
                if t.gen >= 3 {
                    t.gen += 1;
                }
            }
        }
        diffs.insert(3, vec![Term { gen: 1, alg: 0, coeff: 1 }]);
        let mut eps = r.epsilons().to_vec();
        eps.insert(1, Vec::new());
        eps.insert(3, Vec::new());
        let padded = SemifreeResolution::from_parts(SemifreeModule::new(r.algebra().clone(), degrees, diffs).unwrap(), r.target().clone(), eps, 3, true);
        assert!(verify_semifree(&padded).is_holds());
        assert_eq!(is_minimal(&padded).verdict, crate::Verdict::Fails);
        assert!(poincare_coefficients(&padded).is_err());
    }

    #[test]
    fn truncation() {
        let t = t2();
        let r = semifree_resolution(t.select("k").unwrap(), 5).unwrap();
        assert_eq!(truncate_resolution(&r, 5).semifree().degrees(), r.semifree().degrees());
        let r2 = truncate_resolution(&r, 2);
        assert_eq!(counts(&r2), vec![1, 1, 1]);
        assert!(verify_semifree(&r2).is_holds());
        assert_eq!(truncate_resolution(&r, -1).semifree().rank(), 0);
    }

    #[test]
    fn windows() {
        assert_eq!(window_hom(10, 0), TrustWindow::at_least(-9));
        assert_eq!(window_hom(0, 0), TrustWindow::at_least(1));
        assert_eq!(window_tensor(10, 0), TrustWindow::at_most(9));
        assert_eq!(window_tensor(10, -3), TrustWindow::at_most(6));
        assert_eq!(window_hom(10, 0).intersect(&window_tensor(10, -3)), TrustWindow::new(-9, 6));
    }

    #[test]
    fn lifts() {
        let s = s3();
        let omega = s.select("omega").unwrap();
        let r = semifree_resolution(omega, 3).unwrap();
        let p = r.semifree();
        let id = lift_morphism(p, p.module(), 0, &Matrix::identity(&fp(), 3)).unwrap().unwrap();
        assert!(id.is_chain_map());
        assert!(is_quasi_iso_on(&id, &TrustWindow::at_most(2)).unwrap().is_holds());

        let aug = r.augmentation();
        let lifted = lift_morphism(p, omega, 0, &aug.induced(0)).unwrap().unwrap();
        assert!(lifted.is_chain_map());
        assert_eq!(lifted.induced(0), aug.induced(0));

        let q = semifree_resolution_with(omega, 3, GeneratorOrder::Reverse).unwrap();
        // H_0(P) -> H_0(ω) -> H_0(Q) through the two augmentations
        let hq = q.augmentation().induced(0);
        let hp = aug.induced(0);
        let inv = {
            let cols = (0..3).map(|i| hq.solve(hp.column(i)).unwrap()).collect();
            Matrix::from_columns(&fp(), 3, cols)
        };
        let f = lift_morphism(p, q.semifree().module(), 0, &inv).unwrap().unwrap();
        assert!(is_quasi_iso_on(&f, &TrustWindow::at_most(2)).unwrap().is_holds());

        // no degree-0 map k -> k lifts to a map into a module with zero H_0
        let res = residue_module(&s.algebra).unwrap();
        let rk = semifree_resolution(&res, 1).unwrap();
        let zero = crate::DGModule::zero(s.algebra.clone());
        assert!(lift_morphism(rk.semifree(), &zero, 0, &Matrix::zero(&fp(), 0, 1)).unwrap().is_some());
    }

    #[test]
    fn evaluation_through_truncated_hom() {
        let s = s3();
        let omega = s.select("omega").unwrap();
        let r = semifree_resolution(omega, 4).unwrap();
        let hom = hom_complex(r.semifree(), omega).unwrap();
        assert_eq!(hom.complex().homology_dim(0), 3);
        for n in window_hom(4, 0).clamp(-3, 2) {
            assert_eq!(hom.complex().homology_dim(n), usize::from(n == 0) * 3, "degree {n}");
        }
        let incl = truncate_module_below(hom.module(), -1);
        let t = tensor_over_a(r.semifree(), &incl.source).unwrap();
        let ev = evaluation_through(&t, &hom, &incl.map).unwrap();
        assert!(ev.linearity_defect().is_none());
        assert!(is_quasi_iso_on(&ev.map, &window_tensor(4, -1)).unwrap().is_holds());
        // without truncation the junk below the window leaks into low degrees
        let raw = evaluation_map(r.semifree(), omega).unwrap();
        assert!(!is_quasi_iso_on(&raw.map, &window_tensor(4, -1)).unwrap().is_holds());
    }

    #[test]
    fn tensor_of_resolutions_resolves_tensor() {
        let t = t2();
        let k = t.select("k").unwrap();
        let r = semifree_resolution(k, 4).unwrap();
        let a = Arc::new(tensor_algebras(&t.algebra, &t.algebra).unwrap());
        let kk = tensor_modules_over(a.clone(), k, k).unwrap();
        let rr = tensor_resolutions(&r, &r, &kk, 4).unwrap();
        assert!(verify_semifree(&rr).is_holds());
        assert_eq!(counts(&rr), vec![1, 2, 3, 4, 5]);
        assert!(is_minimal(&rr).is_holds());
        let direct = semifree_resolution(&kk, 4).unwrap();
        assert_eq!(counts(&direct), counts(&rr));
        assert!(is_quasi_iso(&ChainMap::identity(kk.complex())).unwrap().is_holds());
    }

    #[test]
    fn workspace_reuses_deeper_resolutions() {
        let t = t2();
        let ws = Workspace::new();
        let k = t.select("k").unwrap();
        let deep = ws.resolve(k, 6).unwrap();
        assert!(ws.has(k, 4));
        let shallow = ws.resolve(k, 3).unwrap();
        assert_eq!(shallow.bound(), 3);
        assert_eq!(shallow.semifree().rank(), 4);
        assert_eq!(deep.semifree().rank(), 7);
        assert_ne!(fingerprint(k), fingerprint(t.select("R").unwrap()));
    }
}
