//! Text definitions of algebras and modules, and report records.
//!
//! Scalars are decimal strings (`"3"`, `"-1/2"`). Structure constants are
//! sparse tuples; omitted entries are zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogEntry, NamedModule, Role};
use crate::complex::DGComplex;
use crate::dg::{DGAlgebra, DGModule, LocalityCertificate};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::linalg::{collect_sparse, Matrix, SparseVec};
use crate::verdict::{TrustWindow, Verdict, VerdictReport};

pub const DEFINITION_FORMAT: &str = "dgmod-definitions";
pub const REPORT_FORMAT: &str = "dgmod-report";
pub const FORMAT_VERSION: u32 = 1;

/// `(degree, row, col, value)`: entry of `∂ : X_degree -> X_{degree-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry(pub i64, pub usize, pub usize, pub String);

/// `(i, a, j, b, c, value)`: coefficient of basis `c` of degree `i + j` in
/// `e_a · e_b`, where `e_a` has degree `i` (algebra) and `e_b` degree `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry(pub usize, pub usize, pub i64, pub usize, pub usize, pub String);

/// `(index, value)`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorEntry(pub usize, pub String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityDef {
    pub ideal: Vec<Vec<VectorEntry>>,
    pub exponent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDef {
    pub name: String,
    /// Dimensions of degrees `0, 1, ...`.
    pub dims: Vec<usize>,
    #[serde(default)]
    pub differential: Vec<DiffEntry>,
    #[serde(default)]
    pub multiplication: Vec<ProductEntry>,
    pub unit: Vec<VectorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locality: Option<LocalityDef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDef {
    pub name: String,
    pub algebra: String,
    #[serde(default = "other_role")]
    pub role: Role,
    pub lo: i64,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub differential: Vec<DiffEntry>,
    /// Same layout as algebra products, with `j` a module degree.
    #[serde(default)]
    pub action: Vec<ProductEntry>,
}

fn other_role() -> Role {
    Role::Other
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionFile {
    pub format: String,
    pub version: u32,
    pub field: FieldSpec,
    #[serde(default)]
    pub algebras: Vec<AlgebraDef>,
    #[serde(default)]
    pub modules: Vec<ModuleDef>,
}

impl DefinitionFile {
    pub fn new(field: FieldSpec) -> Self {
        DefinitionFile { format: DEFINITION_FORMAT.into(), version: FORMAT_VERSION, field, algebras: Vec::new(), modules: Vec::new() }
    }

    /// Checks the header.
    pub fn check_header(&self) -> Result<()> {
        if self.format != DEFINITION_FORMAT {
            return Err(Error::Parse(format!("format {:?}, expected {DEFINITION_FORMAT:?}", self.format)));
        }
        if self.version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported version {}", self.version)));
        }
        Ok(())
    }
}

/// Algebras and modules read from definitions, in file order.
#[derive(Clone, Debug)]
pub struct Loaded<F: Field> {
    pub algebras: Vec<(String, Arc<DGAlgebra<F>>)>,
    pub modules: Vec<(String, NamedModule<F>)>,
}

impl<F: Field> Default for Loaded<F> {
    fn default() -> Self {
        Loaded { algebras: Vec::new(), modules: Vec::new() }
    }
}

impl<F: Field> Loaded<F> {
    pub fn algebra(&self, name: &str) -> Option<&Arc<DGAlgebra<F>>> {
        self.algebras.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    /// Modules over the named algebra as a catalog entry.
    pub fn entry(&self, algebra: &str) -> Option<CatalogEntry<F>> {
        let a = self.algebra(algebra)?.clone();
        let modules = self.modules.iter().filter(|(n, _)| n == algebra).map(|(_, m)| m.clone()).collect();
        Some(CatalogEntry { name: algebra.to_string(), algebra: a, modules })
    }
}

fn parse_vec<F: Field>(field: &F, entries: &[VectorEntry], dim: usize, what: &str) -> Result<SparseVec<F::Elem>> {
    let mut v = Vec::with_capacity(entries.len());
    for VectorEntry(i, x) in entries {
        if *i >= dim {
            return Err(Error::Parse(format!("{what}: index {i} out of range {dim}")));
        }
        v.push((*i, field.parse(x)?));
    }
    Ok(collect_sparse(field, v))
}

fn dim_of(lo: i64, dims: &[usize], n: i64) -> usize {
    let k = n - lo;
    if k >= 0 && (k as usize) < dims.len() {
        dims[k as usize]
    } else {
        0
    }
}

fn build_complex<F: Field>(field: &F, lo: i64, dims: &[usize], entries: &[DiffEntry], what: &str) -> Result<DGComplex<F>> {
    let mut by_degree: BTreeMap<i64, Vec<(usize, usize, F::Elem)>> = BTreeMap::new();
    for DiffEntry(n, r, c, x) in entries {
        let (rows, cols) = (dim_of(lo, dims, n - 1), dim_of(lo, dims, *n));
        if *r >= rows || *c >= cols {
            return Err(Error::Parse(format!("{what}: differential entry ({n}, {r}, {c}) outside {rows}x{cols}")));
        }
        by_degree.entry(*n).or_default().push((*r, *c, field.parse(x)?));
    }
    DGComplex::from_fn(field, lo, dims.to_vec(), |n| {
        Matrix::from_triplets(field, dim_of(lo, dims, n - 1), dim_of(lo, dims, n), by_degree.get(&n).cloned().unwrap_or_default())
    })
}

type Cells<E> = BTreeMap<(usize, usize, i64), Vec<(usize, usize, E)>>;

fn parse_products<F: Field>(
    field: &F,
    alg_dims: &[usize],
    lo: i64,
    dims: &[usize],
    entries: &[ProductEntry],
    what: &str,
) -> Result<Cells<F::Elem>> {
    let mut cells: Cells<F::Elem> = BTreeMap::new();
    for ProductEntry(i, a, j, b, c, x) in entries {
        let ai = alg_dims.get(*i).copied().unwrap_or(0);
        if *a >= ai || *b >= dim_of(lo, dims, *j) || *c >= dim_of(lo, dims, *j + *i as i64) {
            return Err(Error::Parse(format!("{what}: structure constant ({i}, {a}, {j}, {b}, {c}) out of range")));
        }
        cells.entry((*i, *a, *j)).or_default().push((*c, *b, field.parse(x)?));
    }
    Ok(cells)
}

fn cell_matrix<F: Field>(field: &F, cells: &Cells<F::Elem>, lo: i64, dims: &[usize], i: usize, a: usize, n: i64) -> Matrix<F> {
    let entries = cells.get(&(i, a, n)).cloned().unwrap_or_default();
    Matrix::from_triplets(field, dim_of(lo, dims, n + i as i64), dim_of(lo, dims, n), entries)
}

pub fn build_algebra<F: Field>(field: &F, def: &AlgebraDef) -> Result<DGAlgebra<F>> {
    let what = format!("algebra {}", def.name);
    let cx = build_complex(field, 0, &def.dims, &def.differential, &what)?;
    let cells = parse_products(field, &def.dims, 0, &def.dims, &def.multiplication, &what)?;
    let unit = parse_vec(field, &def.unit, def.dims.first().copied().unwrap_or(0), &what)?;
    let locality = match &def.locality {
        Some(l) => Some(LocalityCertificate {
            ideal: l.ideal.iter().map(|v| parse_vec(field, v, def.dims[0], &what)).collect::<Result<_>>()?,
            exponent: l.exponent,
        }),
        None => None,
    };
    DGAlgebra::new(cx, |i, a, j| cell_matrix(field, &cells, 0, &def.dims, i, a, j), unit, locality)
}

pub fn build_module<F: Field>(field: &F, algebra: &Arc<DGAlgebra<F>>, def: &ModuleDef) -> Result<DGModule<F>> {
    let what = format!("module {}", def.name);
    let cx = build_complex(field, def.lo, &def.dims, &def.differential, &what)?;
    let cells = parse_products(field, algebra.complex().dims(), def.lo, &def.dims, &def.action, &what)?;
    DGModule::new(algebra.clone(), cx, |i, a, n| cell_matrix(field, &cells, def.lo, &def.dims, i, a, n))
}

/// Builds every object; modules may refer to algebras of `known` or of the file itself.
pub fn load<F: Field>(field: &F, file: &DefinitionFile, known: &Loaded<F>) -> Result<Loaded<F>> {
    file.check_header()?;
    if file.field != field.spec() {
        return Err(Error::FieldMismatch(file.field, field.spec()));
    }
    let mut out = Loaded::default();
    for def in &file.algebras {
        out.algebras.push((def.name.clone(), Arc::new(build_algebra(field, def)?)));
    }
    for def in &file.modules {
        let a = out
            .algebra(&def.algebra)
            .or_else(|| known.algebra(&def.algebra))
            .cloned()
            .ok_or_else(|| Error::Parse(format!("module {} refers to unknown algebra {}", def.name, def.algebra)))?;
        let module = build_module(field, &a, def)?;
        out.modules.push((def.algebra.clone(), NamedModule { name: def.name.clone(), role: def.role, module }));
    }
    Ok(out)
}

fn render_vec<F: Field>(field: &F, v: &[(usize, F::Elem)]) -> Vec<VectorEntry> {
    v.iter().map(|(i, x)| VectorEntry(*i, field.render(x))).collect()
}

fn render_complex<F: Field>(cx: &DGComplex<F>) -> Vec<DiffEntry> {
    let mut out = Vec::new();
    if cx.is_zero() {
        return out;
    }
    for n in cx.lo()..=cx.hi() {
        for (r, c, x) in cx.d(n).triplets() {
            out.push(DiffEntry(n, r, c, cx.field().render(x)));
        }
    }
    out
}

fn render_products<F: Field>(field: &F, alg_dims: &[usize], lo: i64, count: usize, act: impl Fn(usize, usize, i64) -> Matrix<F>) -> Vec<ProductEntry> {
    let mut out = Vec::new();
    for (i, &ai) in alg_dims.iter().enumerate() {
        for a in 0..ai {
            for k in 0..count {
                let n = lo + k as i64;
                for (c, b, x) in act(i, a, n).triplets() {
                    out.push(ProductEntry(i, a, n, b, c, field.render(x)));
                }
            }
        }
    }
    out
}

pub fn export_algebra<F: Field>(name: &str, a: &DGAlgebra<F>) -> AlgebraDef {
    let f = a.field();
    let dims = a.complex().dims().to_vec();
    AlgebraDef {
        name: name.to_string(),
        differential: render_complex(a.complex()),
        multiplication: render_products(f, &dims, 0, dims.len(), |i, b, j| a.left(i, b, j).into_owned()),
        unit: render_vec(f, a.unit()),
        locality: a.locality().map(|l| LocalityDef { ideal: l.ideal.iter().map(|v| render_vec(f, v)).collect(), exponent: l.exponent }),
        dims,
    }
}

pub fn export_module<F: Field>(name: &str, algebra: &str, role: Role, m: &DGModule<F>) -> ModuleDef {
    let f = m.field();
    let cx = m.complex();
    let dims = if cx.is_zero() { Vec::new() } else { cx.dims().to_vec() };
    ModuleDef {
        name: name.to_string(),
        algebra: algebra.to_string(),
        role,
        lo: if cx.is_zero() { 0 } else { cx.lo() },
        differential: render_complex(cx),
        action: render_products(f, m.algebra().complex().dims(), cx.lo(), dims.len(), |i, a, n| m.act(i, a, n).into_owned()),
        dims,
    }
}

pub fn export_entry<F: Field>(entry: &CatalogEntry<F>) -> DefinitionFile {
    let mut file = DefinitionFile::new(entry.algebra.field().spec());
    file.algebras.push(export_algebra(&entry.name, &entry.algebra));
    for m in &entry.modules {
        file.modules.push(export_module(&m.name, &entry.name, m.role, &m.module));
    }
    file
}

/// One check in a report file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check: String,
    /// The notion being checked.
    pub anchor: String,
    pub verdict: Verdict,
    pub window: TrustWindow,
    #[serde(default)]
    pub witnesses: BTreeMap<String, BTreeMap<i64, i64>>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<VerdictReport>,
}

impl ReportRecord {
    pub fn from_report(anchor: &str, r: VerdictReport) -> Self {
        ReportRecord {
            check: r.check,
            anchor: anchor.to_string(),
            verdict: r.verdict,
            window: r.window,
            witnesses: r.witnesses,
            parameters: r.parameters,
            reason: r.reason,
            timing_ms: None,
            parts: r.parts,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format: String,
    pub version: u32,
    pub kernel_version: String,
    pub records: Vec<ReportRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, String>,
}

impl ReportFile {
    pub fn new(records: Vec<ReportRecord>) -> Self {
        ReportFile {
            format: REPORT_FORMAT.into(),
            version: FORMAT_VERSION,
            kernel_version: crate::KERNEL_VERSION.into(),
            records,
            summary: BTreeMap::new(),
        }
    }

    /// Conjunction of all record verdicts.
    pub fn verdict(&self) -> Verdict {
        self.records.iter().fold(Verdict::Holds, |v, r| v.and(r.verdict))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_koszul, make_short_artinian, make_truncated_poly};
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn catalog_round_trip() {
        let f = PrimeField::new(101).unwrap();
        let t2 = make_truncated_poly(&f, 2).unwrap();
        for entry in [t2.clone(), make_short_artinian(&f), make_koszul(&t2, &vec![(1, 1)]).unwrap()] {
            let file = export_entry(&entry);
            let loaded = load(&f, &file, &Loaded::default()).unwrap();
            let back = loaded.entry(&entry.name).unwrap();
            assert_eq!(*back.algebra, *entry.algebra);
            assert_eq!(back.algebra.locality(), entry.algebra.locality());
            for (m1, m2) in back.modules.iter().zip(&entry.modules) {
                assert_eq!(m1.module, m2.module);
                assert_eq!(m1.role, m2.role);
            }
            assert_eq!(export_entry(&back), file);
        }
    }

    #[test]
    fn rationals_render_fractions() {
        let q = Rationals;
        let entry = make_short_artinian(&q);
        let mut file = export_entry(&entry);
        // repeated entries add up
        let ProductEntry(i, a, j, b, c, _) = file.modules[0].action[0].clone();
        file.modules[0].action.push(ProductEntry(i, a, j, b, c, "-1/2".into()));
        let loaded = load(&q, &file, &Loaded::default()).unwrap();
        let m = &loaded.modules[0].1.module;
        assert_eq!(q.render(&m.act(i, a, j).get(c, b)), "1/2");
    }

    #[test]
    fn malformed_inputs() {
        let f = PrimeField::new(101).unwrap();
        let mut file = export_entry(&make_truncated_poly(&f, 2).unwrap());
        file.algebras[0].multiplication[0].5 = "x1".into();
        assert!(matches!(load(&f, &file, &Loaded::default()), Err(Error::Parse(_))));
        let mut file = export_entry(&make_truncated_poly(&f, 2).unwrap());
        file.modules[0].algebra = "nowhere".into();
        assert!(load(&f, &file, &Loaded::default()).is_err());
        let mut file = export_entry(&make_truncated_poly(&f, 2).unwrap());
        file.version = 9;
        assert!(load(&f, &file, &Loaded::default()).is_err());
    }
}
