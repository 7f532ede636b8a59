//! Windowed verdicts for semidualizing modules, Bass and Auslander classes,
//! derived reflexivity, shift classes, and the tensor theorems.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{is_quasi_iso_on, ChainMap, DGComplex, HomologyDegree};
use crate::constructions::{
    evaluation_through, hom_complex, shift_module, tensor_modules_over, tensor_over_a, truncate_module_above, truncate_module_below,
    DGMorphism, HomComplex,
};
use crate::dg::{validate_dg_module, DGAlgebra, DGModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::resolution::{lift_morphism, poincare_coefficients, tensor_resolutions, window_hom, window_tensor, SemifreeResolution, Workspace};
use crate::verdict::{ShiftClassVerdict, TrustWindow, Verdict, VerdictReport};

/// Degrees of vanishing homology required between a certified support and the
/// edge of its window.
pub const MARGIN: i64 = 2;

fn table<F: Field>(cx: &DGComplex<F>, degrees: RangeInclusive<i64>) -> BTreeMap<i64, i64> {
    degrees.map(|n| (n, cx.homology_dim(n) as i64)).collect()
}

fn nonzero_bounds(t: &BTreeMap<i64, i64>) -> Option<(i64, i64)> {
    let mut it = t.iter().filter(|(_, &v)| v != 0).map(|(&n, _)| n);
    let lo = it.next()?;
    Some((lo, it.last().unwrap_or(lo)))
}

fn covers(w: &TrustWindow, lo: i64, hi: i64) -> bool {
    w.contains(lo - MARGIN) && w.contains(hi + MARGIN)
}

fn require_local<F: Field>(a: &DGAlgebra<F>) -> Result<()> {
    a.locality().map(|_| ()).ok_or(Error::MissingCertificate)
}

fn require_valid<F: Field>(m: &DGModule<F>) -> Result<()> {
    let r = validate_dg_module(m);
    if r.is_holds() {
        Ok(())
    } else {
        Err(Error::InvalidStructure(r.reason.unwrap_or_else(|| "module fails validation".into())))
    }
}

/// `χ : A -> Hom_A(F, C)` together with the Hom complex.
#[derive(Clone, Debug)]
pub struct Homothety<F: Field> {
    pub hom: HomComplex<F>,
    pub morphism: DGMorphism<F>,
}

/// `a ↦ (e ↦ a·ε(e))`.
pub fn homothety<F: Field>(f: &SemifreeResolution<F>) -> Result<Homothety<F>> {
    let hom = hom_complex(f.semifree(), f.target())?;
    let a = f.algebra();
    let p = f.semifree();
    let c = f.target();
    let field = c.field().clone();
    let map = ChainMap::from_fn(a.complex().clone(), hom.complex().clone(), 0, |i| {
        let cols = (0..a.dim(i))
            .map(|b| {
                let values = (0..p.rank())
                    .filter(|&k| !f.epsilon(k).is_empty())
                    .map(|k| (k, c.act(i as usize, b, p.degree(k)).mul_vec(f.epsilon(k))));
                hom.from_values(i, values)
            })
            .collect();
        Matrix::from_columns(&field, hom.complex().dim(i), cols)
    })?;
    let morphism = DGMorphism::new(DGModule::regular(a.clone()), hom.module().clone(), map)?;
    Ok(Homothety { hom, morphism })
}

/// Whether `χ` is a quasi-isomorphism on `window_hom(d, sup C)`.
pub fn is_semidualizing<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    ws.memo("semidualizing", &[c], d, || semidualizing_uncached(ws, c, d))
}

fn semidualizing_uncached<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    const CHECK: &str = "semidualizing";
    let a = c.algebra();
    require_local(a)?;
    require_valid(c)?;
    let sup = c.complex().homology_bounds().map_or(c.hi(), |b| b.1);
    let r = ws.resolve(c, d)?;
    let chi = homothety(&r)?;
    let window = window_hom(d, sup);
    let hx = chi.hom.complex();
    let (alo, ahi) = a.complex().homology_bounds().unwrap_or((0, 0));
    let range = window.clamp(hx.lo().min(alo), hx.hi().max(ahi));
    let q = is_quasi_iso_on(&chi.morphism.map, &window)?;
    let report = VerdictReport::new(CHECK, Verdict::Holds, window)
        .with_param("D", d)
        .with_table("H(Hom(F,C))", table(hx, range.clone()))
        .with_table("H(A)", table(a.complex(), range));
    if !q.is_holds() {
        let reason = q.reason.clone().unwrap_or_default();
        return Ok(VerdictReport { verdict: Verdict::Fails, ..report }.with_reason(reason).with_part(q));
    }
    if !window.contains(alo - MARGIN) {
        let reason = format!("window {window} does not reach degree {} below the homology of A", alo - MARGIN);
        return Ok(VerdictReport { verdict: Verdict::Inconclusive, ..report }.with_reason(reason).with_part(q));
    }
    Ok(report.with_part(q))
}

fn precondition<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, d: i64) -> Result<()> {
    let r = is_semidualizing(ws, c, d)?;
    if r.is_holds() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("C is not certified semidualizing at bound {d} ({})", r.verdict)))
    }
}

/// Lowest nonzero degree of `t` and whether the window certifies vanishing
/// on `MARGIN` degrees below it.
fn bottom_with_margin(t: &BTreeMap<i64, i64>, w: &TrustWindow) -> std::result::Result<(i64, i64), String> {
    let Some((lo, hi)) = nonzero_bounds(t) else {
        return Err(format!("no homology inside the window {w}"));
    };
    if !w.contains(lo - MARGIN) {
        return Err(format!("homology does not vanish on {MARGIN} degrees below {lo} inside {w}"));
    }
    Ok((lo, hi))
}

fn top_with_margin(t: &BTreeMap<i64, i64>, w: &TrustWindow) -> std::result::Result<(i64, i64), String> {
    let Some((lo, hi)) = nonzero_bounds(t) else {
        return Err(format!("no homology inside the window {w}"));
    };
    if !w.contains(hi + MARGIN) {
        return Err(format!("homology does not vanish on {MARGIN} degrees above {hi} inside {w}"));
    }
    Ok((lo, hi))
}

fn inconclusive(check: &str, window: TrustWindow, reason: String) -> VerdictReport {
    VerdictReport::new(check, Verdict::Inconclusive, window).with_reason(reason)
}

fn finish(check: &str, window: TrustWindow, q: VerdictReport) -> VerdictReport {
    let mut r = VerdictReport::new(check, q.verdict, window);
    r.reason = q.reason.clone();
    r.with_part(q)
}

/// `M ∈ B_C`: `RHom(C, M)` bounded and `C ⊗ RHom(C, M) -> M` a quasi-isomorphism.
pub fn bass_membership<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, m: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    precondition(ws, c, d)?;
    ws.memo("bass", &[c, m], d, || bass_uncached(ws, c, m, d))
}

fn bass_uncached<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, m: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    const CHECK: &str = "bass";
    let Some((_, msup)) = m.complex().homology_bounds() else {
        return Ok(VerdictReport::holds(CHECK).with_reason("M is acyclic").with_param("D", d));
    };
    let r = ws.resolve(c, d)?;
    let hom = hom_complex(r.semifree(), m)?;
    let wx = window_hom(d, msup);
    let x = hom.complex();
    let tx = table(x, wx.clamp(x.lo(), x.hi()));
    let (b0, _) = match bottom_with_margin(&tx, &wx) {
        Ok(b) => b,
        Err(why) => return Ok(inconclusive(CHECK, wx, format!("RHom(C,M) not certified bounded: {why}")).with_table("H(RHom(C,M))", tx).with_param("D", d)),
    };
    let trunc = truncate_module_below(hom.module(), b0);
    let t = tensor_over_a(r.semifree(), &trunc.source)?;
    let xi = evaluation_through(&t, &hom, &trunc.map)?;
    let w = window_tensor(d, b0);
    let report = if !w.contains(msup + MARGIN) {
        inconclusive(CHECK, w, format!("tensor window {w} does not cover H(M) with margin"))
    } else {
        finish(CHECK, w, is_quasi_iso_on(&xi.map, &w)?)
    };
    Ok(report.with_table("H(RHom(C,M))", tx).with_param("D", d).with_param("truncation", b0))
}

/// `M ∈ A_C`: `C ⊗ M` bounded and `M -> RHom(C, C ⊗ M)` a quasi-isomorphism.
pub fn auslander_membership<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, m: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    precondition(ws, c, d)?;
    ws.memo("auslander", &[c, m], d, || auslander_uncached(ws, c, m, d))
}

fn auslander_uncached<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, m: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    const CHECK: &str = "auslander";
    let Some((minf, msup)) = m.complex().homology_bounds() else {
        return Ok(VerdictReport::holds(CHECK).with_reason("M is acyclic").with_param("D", d));
    };
    let r = ws.resolve(c, d)?;
    let p = r.semifree();
    let t = tensor_over_a(p, m)?;
    let wt = window_tensor(d, minf);
    let tc = t.complex();
    let tt = table(tc, wt.clamp(tc.lo(), tc.hi()));
    let (_, t0) = match top_with_margin(&tt, &wt) {
        Ok(b) => b,
        Err(why) => return Ok(inconclusive(CHECK, wt, format!("C⊗M not certified bounded: {why}")).with_table("H(C⊗M)", tt).with_param("D", d)),
    };
    let proj = truncate_module_above(t.module(), t0);
    let hom = hom_complex(p, &proj.target)?;
    let field = m.field().clone();
    let gamma = ChainMap::from_fn(m.complex().clone(), hom.complex().clone(), 0, |n| {
        let comps: Vec<(usize, i64)> = (0..p.rank()).map(|k| (k, n + p.degree(k))).collect();
        let cols = (0..m.dim(n))
            .map(|y| {
                let values = comps.iter().filter_map(|&(k, tn)| {
                    let idx = t.index(tn, k, y)?;
                    let col = proj.map.component(tn).column(idx).clone();
                    let odd = (n * p.degree(k)).rem_euclid(2) == 1;
                    Some((k, col.into_iter().map(|(i, x)| (i, field.signed(odd, x))).collect()))
                });
                hom.from_values(n, values)
            })
            .collect();
        Matrix::from_columns(&field, hom.complex().dim(n), cols)
    })?;
    let w = window_hom(d, t0);
    let report = if !covers(&w, minf, msup) {
        inconclusive(CHECK, w, format!("Hom window {w} does not cover H(M) with margin"))
    } else {
        finish(CHECK, w, is_quasi_iso_on(&gamma, &w)?)
    };
    Ok(report.with_table("H(C⊗M)", tt).with_param("D", d).with_param("truncation", t0))
}

/// `δ : M -> RHom(RHom(M, C), C)` a quasi-isomorphism with `RHom(M, C)` bounded.
pub fn derived_reflexive<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, m: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    precondition(ws, c, d)?;
    ws.memo("reflexive", &[c, m], d, || reflexive_uncached(ws, c, m, d))
}

fn reflexive_uncached<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, m: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    const CHECK: &str = "reflexive";
    let Some((minf, msup)) = m.complex().homology_bounds() else {
        return Ok(VerdictReport::holds(CHECK).with_reason("M is acyclic").with_param("D", d));
    };
    let csup = c.complex().homology_bounds().map_or(c.hi(), |b| b.1);
    let g = ws.resolve(m, d)?;
    let hx = hom_complex(g.semifree(), c)?;
    let wx = window_hom(d, csup);
    let x = hx.complex();
    let tx = table(x, wx.clamp(x.lo(), x.hi()));
    let (b0, _) = match bottom_with_margin(&tx, &wx) {
        Ok(b) => b,
        Err(why) => return Ok(inconclusive(CHECK, wx, format!("RHom(M,C) not certified bounded: {why}")).with_table("H(RHom(M,C))", tx).with_param("D", d)),
    };
    let trunc = truncate_module_below(hx.module(), b0);
    let l = ws.resolve(&trunc.source, d)?;
    let lp = l.semifree();
    let hl = hom_complex(lp, c)?;
    let field = c.field().clone();
    // each basis element of L as a map G -> C through τX -> X
    let maps: Vec<Option<ChainMap<F>>> = (0..lp.rank())
        .map(|k| {
            let deg = lp.degree(k);
            let f = trunc.map.component(deg).mul_vec(l.epsilon(k));
            (!f.is_empty()).then(|| hx.as_map(deg, &f))
        })
        .collect();
    let gp = g.semifree();
    let delta = ChainMap::from_fn(gp.module().complex().clone(), hl.complex().clone(), 0, |q| {
        let comps: Vec<(usize, std::borrow::Cow<'_, Matrix<F>>)> =
            maps.iter().enumerate().filter_map(|(k, f)| f.as_ref().map(|f| (k, f.component(q)))).collect();
        let cols = (0..gp.dim(q))
            .map(|z| {
                let values = comps.iter().map(|(k, mat)| {
                    let odd = (q * lp.degree(*k)).rem_euclid(2) == 1;
                    (*k, mat.column(z).iter().map(|(i, x)| (*i, field.signed(odd, x.clone()))).collect())
                });
                hl.from_values(q, values)
            })
            .collect();
        Matrix::from_columns(&field, hl.complex().dim(q), cols)
    })?;
    let w = window_hom(d, csup).intersect(&TrustWindow::at_most(d - 1));
    let report = if !covers(&w, minf, msup) {
        inconclusive(CHECK, w, format!("window {w} does not cover H(M) with margin"))
    } else {
        finish(CHECK, w, is_quasi_iso_on(&delta, &w)?)
    };
    Ok(report.with_table("H(RHom(M,C))", tx).with_param("D", d).with_param("truncation", b0).with_param("degreewise finite", true))
}

/// For each degree with homology and each nonempty set `S` of ideal
/// generators, `dim Σ_{g∈S} g·H_n(M)`.
pub fn action_profile<F: Field>(m: &DGModule<F>) -> BTreeMap<(i64, usize), usize> {
    let mut out = BTreeMap::new();
    let Ok(gens) = m.algebra().ideal_generators() else { return out };
    let gens: Vec<_> = gens.into_iter().take(6).collect();
    let cx = m.complex();
    for n in cx.lo()..=cx.hi() {
        let h = HomologyDegree::compute(cx, n);
        if h.dim == 0 {
            continue;
        }
        let images: Vec<Vec<SparseVec<F::Elem>>> = gens
            .iter()
            .map(|g| {
                let act = m.act_elem_matrix(0, g, n);
                h.reps.columns().iter().map(|z| h.project(&act.mul_vec(z)).expect("cycles act to cycles")).collect()
            })
            .collect();
        for mask in 1usize..(1 << gens.len()) {
            let mut ech = Echelon::new(m.field().clone(), h.dim);
            for (i, img) in images.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for v in img {
                        ech.insert(v.clone());
                    }
                }
            }
            out.insert((n, mask), ech.rank());
        }
    }
    out
}

fn distinct(invariant: &str, evidence: String) -> ShiftClassVerdict {
    ShiftClassVerdict::Distinct { invariant: invariant.into(), evidence }
}

/// Whether `C ≃ Σⁿ B` for some `n`: invariants first, then an explicit chain
/// map from a resolution of `B` into `Σ^{-n} C`.
pub fn classify_shift<F: Field>(ws: &Workspace<F>, b: &DGModule<F>, c: &DGModule<F>, d: i64) -> Result<ShiftClassVerdict> {
    let hb: BTreeMap<i64, usize> = b.complex().homology_dims().into_iter().filter(|(_, v)| *v > 0).collect();
    let hc: BTreeMap<i64, usize> = c.complex().homology_dims().into_iter().filter(|(_, v)| *v > 0).collect();
    let (Some(&ib), Some(&ic)) = (hb.keys().next(), hc.keys().next()) else {
        if hb.is_empty() && hc.is_empty() {
            return Ok(ShiftClassVerdict::Equivalent { shift: 0, evidence: "both modules are acyclic".into() });
        }
        return Ok(distinct("graded homology dimensions", "exactly one module is acyclic".into()));
    };
    let n = ic - ib;
    let shifted: BTreeMap<i64, usize> = hb.iter().map(|(k, v)| (k + n, *v)).collect();
    if shifted != hc {
        return Ok(distinct("graded homology dimensions", format!("{hb:?} vs {hc:?}")));
    }
    let gb = crate::dg::homological_bounds(b).generators;
    let gc = crate::dg::homological_bounds(c).generators;
    let gb_shifted: BTreeMap<i64, usize> = gb.iter().map(|(k, v)| (k + n, *v)).collect();
    if gb_shifted != gc {
        return Ok(distinct("minimal generator counts", format!("{gb:?} vs {gc:?}")));
    }
    let pb: BTreeMap<(i64, usize), usize> = action_profile(b).into_iter().map(|((k, s), v)| ((k + n, s), v)).collect();
    let pc = action_profile(c);
    if pb != pc {
        let at = pb.iter().find(|(k, v)| pc.get(k) != Some(v)).map(|(k, _)| *k);
        return Ok(distinct("action profile", format!("ideal images differ at (degree, generator set) {at:?}")));
    }
    let rb = ws.resolve(b, d)?;
    let rc = ws.resolve(c, d + n)?;
    if let (Ok(cb), Ok(cc)) = (poincare_coefficients(&rb), poincare_coefficients(&rc)) {
        let lb = rb.basis_counts();
        let lc = rc.basis_counts();
        if let Some(j) = lb.iter().find(|(j, v)| lc.get(&(**j + n)).is_some_and(|w| w != *v)).map(|(j, _)| *j) {
            return Ok(distinct("Poincaré coefficients", format!("{cb:?} vs {cc:?} first differ at degree {}", j + n)));
        }
    }
    let top = hb.keys().last().copied().unwrap_or(ib);
    if d - 1 < top + MARGIN {
        return Ok(ShiftClassVerdict::Inconclusive { reason: format!("bound {d} leaves H(B) uncertified with margin") });
    }
    let target = shift_module(c, -n);
    let window = TrustWindow::at_most(d - 1);
    let p = rb.semifree();
    let hp = HomologyDegree::compute(p.module().complex(), ib);
    let ht = HomologyDegree::compute(target.complex(), ib);
    if hp.dim == ht.dim {
        if let Some(f) = lift_morphism(p, &target, ib, &Matrix::identity(b.field(), hp.dim))? {
            if is_quasi_iso_on(&f, &window)?.is_holds() {
                return Ok(ShiftClassVerdict::Equivalent { shift: n, evidence: "lift of the identity in echelon bases".into() });
            }
        }
    }
    let hom = hom_complex(p, &target)?;
    let cycles = hom.complex().d(0).kernel_basis();
    if cycles.cols() > 0 {
        let field = b.field();
        for seed in 0..4u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v: SparseVec<F::Elem> = Vec::new();
            for z in cycles.columns() {
                v = crate::linalg::axpy(field, &v, &field.random(&mut rng), z);
            }
            let f = hom.as_map(0, &v);
            if is_quasi_iso_on(&f, &window)?.is_holds() {
                return Ok(ShiftClassVerdict::Equivalent { shift: n, evidence: format!("seeded random chain map (seed {seed})") });
            }
        }
    }
    Ok(ShiftClassVerdict::Inconclusive { reason: format!("invariants agree for shift {n} but no quasi-isomorphism was found") })
}

/// `B ≈ C` as mutual Bass containment.
pub fn approx_equivalent<F: Field>(ws: &Workspace<F>, b: &DGModule<F>, c: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    let r1 = bass_membership(ws, c, b, d)?;
    let r2 = bass_membership(ws, b, c, d)?;
    let v = r1.verdict.and(r2.verdict);
    Ok(VerdictReport::new("approx", v, r1.window.intersect(&r2.window)).with_part(r1).with_part(r2))
}

/// Registers a resolution of `target = M' ⊗ M''` built from resolutions of the factors.
pub fn resolve_tensor<F: Field>(ws: &Workspace<F>, target: &DGModule<F>, m1: &DGModule<F>, m2: &DGModule<F>, d: i64) -> Result<()> {
    if ws.has(target, d) {
        return Ok(());
    }
    let (Some((i1, _)), Some((i2, _))) = (m1.complex().homology_bounds(), m2.complex().homology_bounds()) else {
        return Ok(());
    };
    let r1 = ws.resolve(m1, d - i2)?;
    let r2 = ws.resolve(m2, d - i1)?;
    ws.register(target, Arc::new(tensor_resolutions(&r1, &r2, target, d)?));
    Ok(())
}

/// `ψ(C', C'') = C' ⊗ C''` over `A' ⊗ A''` with its semidualizing verdict.
#[derive(Clone, Debug)]
pub struct Psi<F: Field> {
    pub module: DGModule<F>,
    pub report: VerdictReport,
}

pub fn psi<F: Field>(ws: &Workspace<F>, algebra: &Arc<DGAlgebra<F>>, c1: &DGModule<F>, c2: &DGModule<F>, d: i64) -> Result<Psi<F>> {
    precondition(ws, c1, d)?;
    precondition(ws, c2, d)?;
    let module = tensor_modules_over(algebra.clone(), c1, c2)?;
    resolve_tensor(ws, &module, c1, c2, d)?;
    let report = is_semidualizing(ws, &module, d)?;
    Ok(Psi { module, report })
}

/// The three class memberships covered by the tensor theorems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    Bass,
    Auslander,
    Reflexive,
}

impl ClassKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Bass => "bass",
            ClassKind::Auslander => "auslander",
            ClassKind::Reflexive => "reflexive",
        }
    }

    pub fn membership<F: Field>(self, ws: &Workspace<F>, c: &DGModule<F>, m: &DGModule<F>, d: i64) -> Result<VerdictReport> {
        match self {
            ClassKind::Bass => bass_membership(ws, c, m, d),
            ClassKind::Auslander => auslander_membership(ws, c, m, d),
            ClassKind::Reflexive => derived_reflexive(ws, c, m, d),
        }
    }
}

/// Factor memberships `N' ∈ K_{C'}`, `N'' ∈ K_{C''}` and the tensor membership
/// `N' ⊗ N'' ∈ K_{C'⊗C''}`. The check holds when the tensor verdict holds
/// whenever both factor verdicts do; with a non-holding factor it records the
/// tensor verdict as the converse direction.
pub struct TensorClassCase<'a, F: Field> {
    pub c: (&'a DGModule<F>, &'a DGModule<F>),
    pub n: (&'a DGModule<F>, &'a DGModule<F>),
}

pub fn tensor_class_theorem<F: Field>(
    ws: &Workspace<F>,
    kind: ClassKind,
    algebra: &Arc<DGAlgebra<F>>,
    case: TensorClassCase<'_, F>,
    d: i64,
) -> Result<VerdictReport> {
    let f1 = kind.membership(ws, case.c.0, case.n.0, d)?;
    let f2 = kind.membership(ws, case.c.1, case.n.1, d)?;
    let c = tensor_modules_over(algebra.clone(), case.c.0, case.c.1)?;
    let n = tensor_modules_over(algebra.clone(), case.n.0, case.n.1)?;
    resolve_tensor(ws, &c, case.c.0, case.c.1, d)?;
    if kind == ClassKind::Reflexive {
        resolve_tensor(ws, &n, case.n.0, case.n.1, d)?;
    }
    precondition(ws, &c, d)?;
    let t = kind.membership(ws, &c, &n, d)?;
    let factors = f1.verdict.and(f2.verdict);
    let (verdict, role) = match (factors, t.verdict) {
        (Verdict::Holds, v) => (v, "forward"),
        (_, Verdict::Holds) => (Verdict::Inconclusive, "converse"),
        (_, _) => (Verdict::Holds, "converse"),
    };
    let mut r = VerdictReport::new(format!("{} tensor", kind.name()), verdict, t.window)
        .with_param("direction", role)
        .with_param("factors", factors)
        .with_param("tensor", t.verdict)
        .with_param("D", d);
    if verdict != Verdict::Holds {
        r.reason = Some(match role {
            "forward" => format!("factors hold but the tensor verdict is {}", t.verdict),
            _ => "tensor holds although a factor does not hold".into(),
        });
    }
    Ok(r.with_part(f1).with_part(f2).with_part(t))
}

/// The vanishing lemma for semidualizing `C`: `M ≃ 0`, `F ⊗_A M ≃ 0` and
/// `Hom_A(F, M) ≃ 0` agree on their windows.
pub fn vanishing_lemma<F: Field>(ws: &Workspace<F>, c: &DGModule<F>, m: &DGModule<F>, d: i64) -> Result<VerdictReport> {
    let r = ws.resolve(c, d)?;
    let zero = m.complex().homology_bounds().is_none();
    let t = tensor_over_a(r.semifree(), m)?;
    let wt = window_tensor(d, m.lo());
    let tc = t.complex();
    let t_zero = wt.clamp(tc.lo(), tc.hi()).all(|n| tc.homology_dim(n) == 0);
    let hom = hom_complex(r.semifree(), m)?;
    let msup = m.complex().homology_bounds().map_or(m.hi(), |b| b.1);
    let wh = window_hom(d, msup);
    let hc = hom.complex();
    let h_zero = wh.clamp(hc.lo(), hc.hi()).all(|n| hc.homology_dim(n) == 0);
    let agree = zero == t_zero && zero == h_zero;
    let mut rep = VerdictReport::new("vanishing lemma", Verdict::from_bool(agree), wt)
        .with_param("M acyclic", zero)
        .with_param("tensor acyclic", t_zero)
        .with_param("hom acyclic", h_zero);
    if !agree {
        rep.reason = Some("the three acyclicity conditions disagree".into());
    }
    Ok(rep)
}

/// A pair of modules `(M', M'')` over `(A', A'')` with display names.
#[derive(Clone, Debug)]
pub struct SuiteCase<F: Field> {
    pub names: (String, String),
    pub modules: (DGModule<F>, DGModule<F>),
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SuiteReport {
    pub verdict: Verdict,
    /// Number of shift classes among the semidualizing tensor products, when every pair was decided.
    pub image_count: Option<usize>,
    pub reports: Vec<VerdictReport>,
}

fn isolated(check: String, r: Result<VerdictReport>) -> VerdictReport {
    match r {
        Ok(mut r) => {
            r.check = check;
            r
        }
        Err(e) => VerdictReport::new(check, Verdict::Inconclusive, TrustWindow::ALL).with_reason(e.to_string()),
    }
}

fn shift_report(check: String, v: &ShiftClassVerdict, expect_equivalent: Option<i64>) -> VerdictReport {
    let verdict = match (v, expect_equivalent) {
        (ShiftClassVerdict::Inconclusive { .. }, _) => Verdict::Inconclusive,
        (ShiftClassVerdict::Equivalent { shift, .. }, Some(n)) => Verdict::from_bool(*shift == n),
        (ShiftClassVerdict::Equivalent { .. }, None) => Verdict::Fails,
        (ShiftClassVerdict::Distinct { .. }, Some(_)) => Verdict::Fails,
        (ShiftClassVerdict::Distinct { .. }, None) => Verdict::Holds,
    };
    let mut r = VerdictReport::new(check, verdict, TrustWindow::ALL);
    r.reason = Some(format!("{v:?}"));
    r
}

struct Forward<F: Field> {
    index: usize,
    tensor: DGModule<F>,
}

/// Tensor theorems over `A' ⊗ A''` on each case: semidualizing tensors and
/// the converse, Bass/Auslander/reflexive tensors, compatibility with shifts,
/// and injectivity of `ψ` on the semidualizing cases.
pub fn theorem_suite<F: Field>(
    ws: &Workspace<F>,
    a1: &Arc<DGAlgebra<F>>,
    a2: &Arc<DGAlgebra<F>>,
    cases: &[SuiteCase<F>],
    d: i64,
) -> Result<SuiteReport> {
    require_local(a1)?;
    require_local(a2)?;
    let a = Arc::new(crate::constructions::tensor_algebras(a1, a2)?);
    let mut reports = Vec::new();
    let mut forward: Vec<Forward<F>> = Vec::new();
    for (idx, case) in cases.iter().enumerate() {
        let label = format!("{}⊗{}", case.names.0, case.names.1);
        let (m1, m2) = (&case.modules.0, &case.modules.1);
        let tensor = match tensor_modules_over(a.clone(), m1, m2) {
            Ok(t) => t,
            Err(e) => {
                reports.push(isolated(format!("{label}: tensor"), Err(e)));
                continue;
            }
        };
        let s1 = is_semidualizing(ws, m1, d);
        let s2 = is_semidualizing(ws, m2, d);
        let st = resolve_tensor(ws, &tensor, m1, m2, d).and_then(|_| is_semidualizing(ws, &tensor, d));
        let (s1, s2, st) = match (s1, s2, st) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (a, b, c) => {
                let e = [a.err(), b.err(), c.err()].into_iter().flatten().next().unwrap();
                reports.push(isolated(format!("{label}: semidualizing"), Err(e)));
                continue;
            }
        };
        let factors = s1.verdict.and(s2.verdict);
        let (check, verdict) = match factors {
            Verdict::Holds => ("semidualizing tensor", st.verdict),
            Verdict::Fails => (
                "semidualizing converse",
                match st.verdict {
                    Verdict::Fails => Verdict::Holds,
                    Verdict::Inconclusive => Verdict::Inconclusive,
                    Verdict::Holds => Verdict::Fails,
                },
            ),
            Verdict::Inconclusive => ("semidualizing tensor", Verdict::Inconclusive),
        };
        let holds = st.is_holds() && factors.holds();
        reports.push(
            VerdictReport::new(format!("{label}: {check}"), verdict, st.window)
                .with_param("factors", factors)
                .with_param("tensor", st.verdict)
                .with_param("D", d)
                .with_part(s1)
                .with_part(s2)
                .with_part(st),
        );
        if !holds {
            continue;
        }
        let regular = (DGModule::regular(a1.clone()), DGModule::regular(a2.clone()));
        for (kind, n) in [(ClassKind::Bass, (m1, m2)), (ClassKind::Auslander, (&regular.0, &regular.1)), (ClassKind::Reflexive, (m1, m2))] {
            let r = tensor_class_theorem(ws, kind, &a, TensorClassCase { c: (m1, m2), n }, d);
            reports.push(isolated(format!("{label}: {} tensor", kind.name()), r));
        }
        let shifted = tensor_modules_over(a.clone(), &shift_module(m1, 1), m2)?;
        let v = classify_shift(ws, &tensor, &shifted, d);
        reports.push(match v {
            Ok(v) => shift_report(format!("{label}: shift compatibility"), &v, Some(1)),
            Err(e) => isolated(format!("{label}: shift compatibility"), Err(e)),
        });
        forward.push(Forward { index: idx, tensor });
    }
    // classes of the ψ-images
    let mut parent: Vec<usize> = (0..forward.len()).collect();
    fn root(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            i = p[i];
        }
        i
    }
    let mut decided = true;
    for i in 0..forward.len() {
        for j in i + 1..forward.len() {
            let (ci, cj) = (&cases[forward[i].index], &cases[forward[j].index]);
            let label = format!("{}⊗{} vs {}⊗{}", ci.names.0, ci.names.1, cj.names.0, cj.names.1);
            let f1 = classify_shift(ws, &ci.modules.0, &cj.modules.0, d)?;
            let f2 = classify_shift(ws, &ci.modules.1, &cj.modules.1, d)?;
            let img = classify_shift(ws, &forward[i].tensor, &forward[j].tensor, d)?;
            match &img {
                ShiftClassVerdict::Equivalent { .. } => {
                    let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                    parent[ri] = rj;
                }
                ShiftClassVerdict::Inconclusive { .. } => decided = false,
                ShiftClassVerdict::Distinct { .. } => {}
            }
            let r = if f1.is_distinct() || f2.is_distinct() {
                shift_report(format!("{label}: injectivity"), &img, None)
            } else if let (ShiftClassVerdict::Equivalent { shift: s1, .. }, ShiftClassVerdict::Equivalent { shift: s2, .. }) = (&f1, &f2) {
                shift_report(format!("{label}: well-definedness"), &img, Some(s1 + s2))
            } else {
                VerdictReport::new(format!("{label}: injectivity"), Verdict::Inconclusive, TrustWindow::ALL)
                    .with_reason("factor classes undecided")
            };
            reports.push(r);
        }
    }
    let image_count = decided.then(|| (0..forward.len()).filter(|&i| root(&mut parent, i) == i).count());
    let verdict = reports.iter().fold(Verdict::Holds, |v, r| v.and(r.verdict));
    Ok(SuiteReport { verdict, image_count, reports })
}
