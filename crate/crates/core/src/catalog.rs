//! Deterministic example algebras and modules, plus seeded random complexes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::DGComplex;
use crate::dg::{DGAlgebra, DGModule, LocalityCertificate};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Matrix, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Regular,
    Residue,
    Dualizing,
    Other,
}

#[derive(Clone, Debug)]
pub struct NamedModule<F: Field> {
    pub name: String,
    pub role: Role,
    pub module: DGModule<F>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry<F: Field> {
    pub name: String,
    pub algebra: Arc<DGAlgebra<F>>,
    pub modules: Vec<NamedModule<F>>,
}

impl<F: Field> CatalogEntry<F> {
    pub fn module(&self, name: &str) -> Option<&DGModule<F>> {
        self.modules.iter().find(|m| m.name == name).map(|m| &m.module)
    }

    pub fn by_role(&self, role: Role) -> Option<&DGModule<F>> {
        self.modules.iter().find(|m| m.role == role).map(|m| &m.module)
    }

    /// Looks a module up by name, falling back to role names.
    pub fn select(&self, key: &str) -> Option<&DGModule<F>> {
        self.module(key).or_else(|| match key {
            "regular" | "R" | "A" => self.by_role(Role::Regular),
            "residue" | "k" => self.by_role(Role::Residue),
            "dualizing" | "omega" | "ω" => self.by_role(Role::Dualizing),
            _ => None,
        })
    }
}

/// A commutative algebra concentrated in degree 0 from its basis products.
pub fn algebra_in_degree_zero<F: Field>(
    field: &F,
    dim: usize,
    product: impl Fn(usize, usize) -> SparseVec<F::Elem>,
    unit: SparseVec<F::Elem>,
    locality: Option<LocalityCertificate<F>>,
) -> Result<DGAlgebra<F>> {
    let cx = DGComplex::concentrated(field, 0, dim);
    DGAlgebra::new(cx, |_, a, _| Matrix::from_columns(field, dim, (0..dim).map(|b| product(a, b)).collect()), unit, locality)
}

fn single<F: Field>(field: &F, k: usize) -> SparseVec<F::Elem> {
    vec![(k, field.one())]
}

/// The residue field `k = H_0(A)/m` as a module in degree 0.
pub fn residue_module<F: Field>(a: &Arc<DGAlgebra<F>>) -> Result<DGModule<F>> {
    let field = a.field();
    let mut ech = Echelon::new(field.clone(), a.dim(0));
    for v in a.maximal_ideal()? {
        ech.insert(v);
    }
    // coordinate along the unit modulo the maximal ideal
    let (u, _) = ech.reduce_full(a.unit().clone(), Vec::new());
    let (lead, ucoef) = u.first().cloned().ok_or_else(|| Error::InvalidStructure("unit lies in the maximal ideal".into()))?;
    let uinv = field.inv(&ucoef).unwrap();
    let scalar = |b: usize| -> F::Elem {
        let (r, _) = ech.reduce_full(single(field, b), Vec::new());
        let c = r.iter().find(|(k, _)| *k == lead).map(|(_, c)| c.clone()).unwrap_or_else(|| field.zero());
        field.mul(&c, &uinv)
    };
    let cx = DGComplex::concentrated(field, 0, 1);
    DGModule::new(a.clone(), cx, |i, b, _| {
        if i == 0 {
            Matrix::from_columns(field, 1, vec![if field.is_zero(&scalar(b)) { vec![] } else { vec![(0, scalar(b))] }])
        } else {
            Matrix::zero(field, 0, 1)
        }
    })
}

/// `Hom_k(A, k)` for an algebra concentrated in degree 0, with `(r·f)(s) = f(rs)`.
pub fn dual_module<F: Field>(a: &Arc<DGAlgebra<F>>) -> Result<DGModule<F>> {
    if a.top() > 0 {
        return Err(Error::Precondition("dual module is built only for algebras in degree 0".into()));
    }
    let field = a.field();
    let cx = DGComplex::concentrated(field, 0, a.dim(0));
    DGModule::new(a.clone(), cx, |_, r, _| a.left(0, r, 0).transpose())
}

/// The field itself.
pub fn make_field<F: Field>(field: &F) -> CatalogEntry<F> {
    let alg = algebra_in_degree_zero(field, 1, |_, _| single(field, 0), single(field, 0), Some(LocalityCertificate { ideal: vec![], exponent: 1 }))
        .expect("field algebra");
    let alg = Arc::new(alg);
    CatalogEntry {
        name: "k".into(),
        modules: vec![NamedModule { name: "k".into(), role: Role::Regular, module: DGModule::regular(alg.clone()) }],
        algebra: alg,
    }
}

/// `k[x]/(xⁿ)` with modules `R`, `k` and `omega`.
pub fn make_truncated_poly<F: Field>(field: &F, n: usize) -> Result<CatalogEntry<F>> {
    if n < 2 {
        return Err(Error::Precondition(format!("truncation order {n} < 2")));
    }
    let cert = LocalityCertificate { ideal: (1..n).map(|k| single(field, k)).collect(), exponent: n };
    let alg = algebra_in_degree_zero(field, n, |a, b| if a + b < n { single(field, a + b) } else { vec![] }, single(field, 0), Some(cert))?;
    Ok(local_entry(format!("T{n}"), Arc::new(alg)))
}

fn local_entry<F: Field>(name: String, alg: Arc<DGAlgebra<F>>) -> CatalogEntry<F> {
    let modules = vec![
        NamedModule { name: "R".into(), role: Role::Regular, module: DGModule::regular(alg.clone()) },
        NamedModule { name: "k".into(), role: Role::Residue, module: residue_module(&alg).expect("local algebra") },
        NamedModule { name: "omega".into(), role: Role::Dualizing, module: dual_module(&alg).expect("degree-zero algebra") },
    ];
    CatalogEntry { name, algebra: alg, modules }
}

/// `k[x,y]/(x², xy, y²)` with basis `1, x, y`, and modules `R`, `k`, `omega`.
pub fn make_short_artinian<F: Field>(field: &F) -> CatalogEntry<F> {
    let cert = LocalityCertificate { ideal: vec![single(field, 1), single(field, 2)], exponent: 2 };
    let alg = algebra_in_degree_zero(
        field,
        3,
        |a, b| match (a, b) {
            (0, b) => single(field, b),
            (a, 0) => single(field, a),
            _ => vec![],
        },
        single(field, 0),
        Some(cert),
    )
    .expect("short artinian algebra");
    local_entry("S3".into(), Arc::new(alg))
}

/// `K = R ⊕ R·e` with `|e| = 1`, `e² = 0`, `∂e = x`, over a base concentrated in degree 0.
pub fn make_koszul<F: Field>(base: &CatalogEntry<F>, x: &SparseVec<F::Elem>) -> Result<CatalogEntry<F>> {
    let r = &base.algebra;
    if r.top() > 0 {
        return Err(Error::Precondition("Koszul base must be concentrated in degree 0".into()));
    }
    let field = r.field();
    let cert = r.locality().ok_or(Error::MissingCertificate)?.clone();
    let mut ideal = Echelon::new(field.clone(), r.dim(0));
    for v in &cert.ideal {
        ideal.insert(v.clone());
    }
    if !ideal.contains(x) {
        return Err(Error::Precondition("Koszul element lies outside the maximal ideal".into()));
    }
    let n = r.dim(0);
    let mx = Matrix::from_columns(field, n, (0..n).map(|s| r.mul(0, x, 0, &single(field, s))).collect());
    let cx = DGComplex::new(field, 0, vec![n, n], vec![Matrix::zero(field, 0, n), mx])?;
    let alg = DGAlgebra::new(
        cx,
        |i, a, j| match (i, j) {
            (0, 0) | (0, 1) | (1, 0) => r.left(0, a, 0).into_owned(),
            _ => Matrix::zero(field, if i as i64 + j > 1 { 0 } else { n }, n),
        },
        r.unit().clone(),
        Some(cert),
    )?;
    let alg = Arc::new(alg);
    let modules = vec![
        NamedModule { name: "R".into(), role: Role::Regular, module: DGModule::regular(alg.clone()) },
        NamedModule { name: "k".into(), role: Role::Residue, module: residue_module(&alg)? },
    ];
    Ok(CatalogEntry { name: format!("K({})", base.name), algebra: alg, modules })
}

/// The non-local algebra `k × k`, used to exercise the locality check.
pub fn make_split<F: Field>(field: &F, hyperplane: SparseVec<F::Elem>) -> DGAlgebra<F> {
    algebra_in_degree_zero(
        field,
        2,
        |a, b| if a == b { single(field, a) } else { vec![] },
        vec![(0, field.one()), (1, field.one())],
        Some(LocalityCertificate { ideal: vec![hyperplane], exponent: 2 }),
    )
    .expect("split algebra")
}

/// Catalog lookup by name: `k`, `T<n>`, `S3`, `K(T<n>)`.
pub fn by_name<F: Field>(field: &F, name: &str) -> Result<CatalogEntry<F>> {
    if name == "k" {
        return Ok(make_field(field));
    }
    if name == "S3" {
        return Ok(make_short_artinian(field));
    }
    if let Some(inner) = name.strip_prefix("K(").and_then(|s| s.strip_suffix(')')) {
        let base = by_name(field, inner)?;
        let x = single(field, 1);
        return make_koszul(&base, &x);
    }
    if let Some(n) = name.strip_prefix('T').and_then(|s| s.parse::<usize>().ok()) {
        return make_truncated_poly(field, n);
    }
    Err(Error::Parse(format!("unknown catalog entry {name}")))
}

/// A seeded complex on `[lo, hi]` with dimensions at most `max_dim`; each
/// differential is a random map composed into the kernel of the previous one.
pub fn random_complex<F: Field>(field: &F, seed: u64, max_dim: usize, lo: i64, hi: i64) -> DGComplex<F> {
    assert!(max_dim <= 6 && hi - lo <= 5 && lo <= hi, "random complexes are desk-scale");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims: Vec<usize> = (lo..=hi).map(|_| rng.gen_range(0..=max_dim)).collect();
    let mut diffs: Vec<Matrix<F>> = vec![Matrix::zero(field, 0, dims[0])];
    for k in 1..dims.len() {
        let kernel = diffs[k - 1].kernel_basis();
        let c = Matrix::from_columns(
            field,
            kernel.cols(),
            (0..dims[k])
                .map(|_| (0..kernel.cols()).filter_map(|r| rng.gen_bool(0.5).then(|| (r, field.random(&mut rng)))).collect())
                .collect(),
        );
        diffs.push(kernel.mul(&c).expect("shapes agree"));
    }
    DGComplex::new(field, lo, dims, diffs).expect("consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{homological_bounds, validate_dg_algebra, validate_dg_module, validate_locality};
    use crate::field::{PrimeField, Rationals};

    fn all_valid<F: Field>(e: &CatalogEntry<F>) {
        assert!(validate_dg_algebra(&e.algebra).is_holds(), "{}", e.name);
        assert!(validate_locality(&e.algebra).is_holds(), "{}", e.name);
        for m in &e.modules {
            assert!(validate_dg_module(&m.module).is_holds(), "{} {}: {:?}", e.name, m.name, validate_dg_module(&m.module).reason);
        }
    }

    #[test]
    fn entries_validate() {
        let f = PrimeField::new(101).unwrap();
        all_valid(&make_field(&f));
        all_valid(&make_field(&Rationals));
        all_valid(&make_truncated_poly(&f, 2).unwrap());
        all_valid(&make_truncated_poly(&f, 3).unwrap());
        all_valid(&make_short_artinian(&f));
        all_valid(&make_short_artinian(&Rationals));
        let t2 = make_truncated_poly(&f, 2).unwrap();
        all_valid(&make_koszul(&t2, &vec![(1, 1)]).unwrap());
    }

    #[test]
    fn shapes() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(make_field(&f).algebra.dim(0), 1);
        let t3 = make_truncated_poly(&f, 3).unwrap();
        assert_eq!(t3.algebra.dim(0), 3);
        assert!(t3.algebra.mul(0, &[(1, 1)], 0, &[(2, 1)]).is_empty());
        let s3 = make_short_artinian(&f);
        assert_eq!(s3.select("omega").unwrap().dim(0), 3);
        let b = homological_bounds(s3.select("omega").unwrap());
        assert_eq!((b.inf, b.sup), (Some(0), Some(0)));
        assert_eq!(b.generators[&0], 2);
        assert!(make_truncated_poly(&f, 1).is_err());
    }

    #[test]
    fn koszul_homology() {
        let f = PrimeField::new(101).unwrap();
        let t2 = make_truncated_poly(&f, 2).unwrap();
        let k = make_koszul(&t2, &vec![(1, 1)]).unwrap();
        assert_eq!(k.algebra.complex().homology_dims(), [(0, 1), (1, 1)].into_iter().collect());
        assert!(make_koszul(&t2, &vec![(0, 1)]).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(random_complex(&f, 1, 4, 0, 3), random_complex(&f, 1, 4, 0, 3));
        for seed in 0..20 {
            assert!(crate::complex::validate_complex(&random_complex(&f, seed, 4, 0, 3)).is_holds());
        }
    }
}
