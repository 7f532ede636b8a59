//! Independent dense checkers over F_p, reading definition files directly.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dgmod::catalog::by_name;
use dgmod::dg::{validate_dg_algebra, validate_dg_module, validate_locality};
use dgmod::io::{export_entry, load, AlgebraDef, DefinitionFile, DiffEntry, Loaded, ModuleDef, ProductEntry, VectorEntry};
use dgmod::{PrimeField, VerdictReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Broken = BTreeSet<&'static str>;

fn modp(s: &str, p: u64) -> u64 {
    let inv = |x: u64| pow(x, p - 2, p);
    let one = |t: &str| -> u64 {
        let v: i64 = t.trim().parse().unwrap();
        v.rem_euclid(p as i64) as u64
    };
    match s.split_once('/') {
        Some((a, b)) => one(a) * inv(one(b)) % p,
        None => one(s),
    }
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank of dense row vectors mod p.
pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = pow(m[r][c], p - 2, p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..cols {
                    m[i][k] = (m[i][k] + p - f * m[r][k] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn in_span(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(&with, p) == rank(rows, p)
}

/// Graded space `lo..` with dims, and a bilinear action `(i, a) x (n, b) -> n + i`.
struct Dense {
    p: u64,
    lo: i64,
    dims: Vec<usize>,
    /// `d[(n, row, col)]`
    d: BTreeMap<(i64, usize, usize), u64>,
    /// `act[(i, a, n, b)]` is a vector in degree `n + i`
    act: BTreeMap<(usize, usize, i64, usize), BTreeMap<usize, u64>>,
}

impl Dense {
    fn dim(&self, n: i64) -> usize {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.dims.len() {
            self.dims[k as usize]
        } else {
            0
        }
    }

    fn degrees(&self) -> std::ops::Range<i64> {
        self.lo..self.lo + self.dims.len() as i64
    }

    fn new(p: u64, lo: i64, dims: &[usize], diff: &[dgmod::io::DiffEntry], act: &[dgmod::io::ProductEntry]) -> Self {
        let mut d = BTreeMap::new();
        for e in diff {
            let v = d.entry((e.0, e.1, e.2)).or_insert(0);
            *v = (*v + modp(&e.3, p)) % p;
        }
        let mut a: BTreeMap<(usize, usize, i64, usize), BTreeMap<usize, u64>> = BTreeMap::new();
        for e in act {
            let v = a.entry((e.0, e.1, e.2, e.3)).or_default().entry(e.4).or_insert(0);
            *v = (*v + modp(&e.5, p)) % p;
        }
        Dense { p, lo, dims: dims.to_vec(), d, act: a }
    }

    /// `d` applied to a vector of degree `n`.
    fn diff(&self, n: i64, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.dim(n - 1)];
        for (c, x) in v.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                if let Some(y) = self.d.get(&(n, r, c)) {
                    *o = (*o + x * y) % self.p;
                }
            }
        }
        out
    }

    fn basis(&self, n: i64, b: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim(n)];
        v[b] = 1;
        v
    }
}

/// `x · v` for `x` a vector of algebra degree `i` and `v` of degree `n` in `space`.
fn act(alg: &Dense, space: &Dense, i: i64, x: &[u64], n: i64, v: &[u64]) -> Vec<u64> {
    let p = space.p;
    let mut out = vec![0; space.dim(n + i)];
    if i < 0 || alg.dim(i) == 0 {
        return out;
    }
    for (a, xa) in x.iter().enumerate() {
        for (b, vb) in v.iter().enumerate() {
            if *xa == 0 || *vb == 0 {
                continue;
            }
            if let Some(col) = space.act.get(&(i as usize, a, n, b)) {
                for (c, y) in col {
                    out[*c] = (out[*c] + xa * vb % p * y) % p;
                }
            }
        }
    }
    out
}

fn add(p: u64, a: &[u64], b: &[u64], sign: i64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| if sign >= 0 { (x + y) % p } else { (x + p - y) % p }).collect()
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn check_d2(x: &Dense, out: &mut Broken) {
    for n in x.degrees() {
        for b in 0..x.dim(n) {
            let dd = x.diff(n - 1, &x.diff(n, &x.basis(n, b)));
            if dd.iter().any(|&v| v != 0) {
                out.insert("differential");
            }
        }
    }
}

fn algebra_dense(p: u64, a: &AlgebraDef) -> Dense {
    Dense::new(p, 0, &a.dims, &a.differential, &a.multiplication)
}

fn unit(p: u64, a: &AlgebraDef) -> Vec<u64> {
    let mut u = vec![0; a.dims.first().copied().unwrap_or(0)];
    for e in &a.unit {
        u[e.0] = (u[e.0] + modp(&e.1, p)) % p;
    }
    u
}

/// Axioms of a graded-commutative DG algebra that fail for `a`.
pub fn broken_algebra(p: u64, a: &AlgebraDef) -> Broken {
    let mut out = Broken::new();
    let x = algebra_dense(p, a);
    check_d2(&x, &mut out);
    let u = unit(p, a);
    let degs: Vec<i64> = x.degrees().collect();
    let mul = |i: i64, v: &[u64], j: i64, w: &[u64]| act(&x, &x, i, v, j, w);
    for &i in &degs {
        for b in 0..x.dim(i) {
            let e = x.basis(i, b);
            if mul(0, &u, i, &e) != e || mul(i, &e, 0, &u) != e {
                out.insert("unitality");
            }
        }
    }
    for &i in &degs {
        for &j in &degs {
            for b in 0..x.dim(i) {
                for c in 0..x.dim(j) {
                    let (e, f) = (x.basis(i, b), x.basis(j, c));
                    let ef = mul(i, &e, j, &f);
                    let fe = mul(j, &f, i, &e);
                    let zero = vec![0; ef.len()];
                    if ef != add(p, &zero, &fe, sign(i * j)) {
                        out.insert("graded commutativity");
                    }
                    if i == j && b == c && i % 2 == 1 && ef.iter().any(|&v| v != 0) {
                        out.insert("odd square");
                    }
                    for &k in &degs {
                        for g in 0..x.dim(k) {
                            let h = x.basis(k, g);
                            if mul(i + j, &ef, k, &h) != mul(i, &e, j + k, &mul(j, &f, k, &h)) {
                                out.insert("associativity");
                            }
                        }
                    }
                    let lhs = x.diff(i + j, &ef);
                    let r1 = mul(i - 1, &x.diff(i, &e), j, &f);
                    let r2 = mul(i, &e, j - 1, &x.diff(j, &f));
                    if lhs != add(p, &r1, &r2, sign(i)) {
                        out.insert("leibniz");
                    }
                }
            }
        }
    }
    out
}

/// Axioms of a DG module over `a` that fail for `m`.
pub fn broken_module(p: u64, a: &AlgebraDef, m: &ModuleDef) -> Broken {
    let mut out = Broken::new();
    let x = algebra_dense(p, a);
    let y = Dense::new(p, m.lo, &m.dims, &m.differential, &m.action);
    check_d2(&y, &mut out);
    let u = unit(p, a);
    for n in y.degrees() {
        for b in 0..y.dim(n) {
            let v = y.basis(n, b);
            if act(&x, &y, 0, &u, n, &v) != v {
                out.insert("unitality");
            }
            for i in x.degrees() {
                for c in 0..x.dim(i) {
                    let e = x.basis(i, c);
                    let ev = act(&x, &y, i, &e, n, &v);
                    for j in x.degrees() {
                        for g in 0..x.dim(j) {
                            let f = x.basis(j, g);
                            let ef = act(&x, &x, i, &e, j, &f);
                            if act(&x, &y, i + j, &ef, n, &v) != act(&x, &y, i, &e, n + j, &act(&x, &y, j, &f, n, &v)) {
                                out.insert("associativity");
                            }
                        }
                    }
                    let lhs = y.diff(n + i, &ev);
                    let r1 = act(&x, &y, i - 1, &x.diff(i, &e), n, &v);
                    let r2 = act(&x, &y, i, &e, n - 1, &y.diff(n, &v));
                    if lhs != add(p, &r1, &r2, sign(i)) {
                        out.insert("leibniz");
                    }
                }
            }
        }
    }
    out
}

/// Failures of the locality certificate of `a`, if any is present.
pub fn broken_locality(p: u64, a: &AlgebraDef) -> Broken {
    let mut out = Broken::new();
    let Some(cert) = &a.locality else { return out };
    let x = algebra_dense(p, a);
    let n0 = x.dim(0);
    let boundaries: Vec<Vec<u64>> = (0..x.dim(1)).map(|b| x.diff(1, &x.basis(1, b))).collect();
    let mut ideal = Vec::new();
    for v in &cert.ideal {
        let mut w = vec![0; n0];
        for e in v {
            if e.0 >= n0 {
                out.insert("ideal");
                return out;
            }
            w[e.0] = (w[e.0] + modp(&e.1, p)) % p;
        }
        ideal.push(w);
    }
    let mut span = boundaries.clone();
    span.extend(ideal.iter().cloned());
    if rank(&span, p) + 1 != n0 {
        out.insert("codimension");
        return out;
    }
    for b in 0..n0 {
        for v in &ideal {
            if !in_span(&span, &act(&x, &x, 0, &x.basis(0, b), 0, v), p) {
                out.insert("ideal");
            }
        }
    }
    let mut power = span.clone();
    for _ in 1..cert.exponent.max(1) {
        let mut next = boundaries.clone();
        for v in &ideal {
            for w in &power {
                next.push(act(&x, &x, 0, v, 0, w));
            }
        }
        power = next;
    }
    if cert.exponent == 0 || power.iter().any(|v| !in_span(&boundaries, v, p)) {
        out.insert("nilpotency");
    }
    out
}

/// Per-object failures: `"algebra"`, `"locality"`, and `"module <name>"`.
pub fn broken_objects(p: u64, file: &DefinitionFile) -> BTreeMap<String, Broken> {
    let mut out = BTreeMap::new();
    let a = &file.algebras[0];
    out.insert("algebra".to_string(), broken_algebra(p, a));
    out.insert("locality".to_string(), broken_locality(p, a));
    for m in &file.modules {
        out.insert(format!("module {}", m.name), broken_module(p, a, m));
    }
    out.retain(|_, v| !v.is_empty());
    out
}

pub const P: u64 = 101;
pub const ENTRIES: [&str; 5] = ["T2", "T3", "S3", "K(T2)", "K(T3)"];

pub fn catalog(name: &str) -> DefinitionFile {
    export_entry(&by_name(&PrimeField::new(P as u32).unwrap(), name).unwrap())
}

fn dim_at(lo: i64, dims: &[usize], n: i64) -> usize {
    let k = n - lo;
    if k >= 0 && (k as usize) < dims.len() {
        dims[k as usize]
    } else {
        0
    }
}

fn value(rng: &mut ChaCha8Rng) -> String {
    rng.gen_range(0..P).to_string()
}

fn random_product(rng: &mut ChaCha8Rng, alg: &[usize], lo: i64, dims: &[usize]) -> Option<ProductEntry> {
    for _ in 0..64 {
        let i = rng.gen_range(0..alg.len());
        let j = lo + rng.gen_range(0..dims.len().max(1)) as i64;
        let (na, nb, nc) = (alg[i], dim_at(lo, dims, j), dim_at(lo, dims, j + i as i64));
        if na * nb * nc > 0 {
            return Some(ProductEntry(i, rng.gen_range(0..na), j, rng.gen_range(0..nb), rng.gen_range(0..nc), value(rng)));
        }
    }
    None
}

fn random_diff(rng: &mut ChaCha8Rng, lo: i64, dims: &[usize]) -> Option<DiffEntry> {
    for _ in 0..64 {
        let n = lo + rng.gen_range(0..dims.len().max(1)) as i64;
        let (r, c) = (dim_at(lo, dims, n - 1), dim_at(lo, dims, n));
        if r * c > 0 {
            return Some(DiffEntry(n, rng.gen_range(0..r), rng.gen_range(0..c), value(rng)));
        }
    }
    None
}

/// Overwrites one structure constant (a product, differential, unit or
/// certificate coordinate); repeated positions are merged so the value is replaced.
pub fn mutate(file: &DefinitionFile, seed: u64) -> Option<(DefinitionFile, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = file.clone();
    let alg_dims = f.algebras[0].dims.clone();
    let what = rng.gen_range(0..6);
    let m = rng.gen_range(0..f.modules.len().max(1));
    let label;
    match what {
        0 => {
            let e = random_product(&mut rng, &alg_dims, 0, &alg_dims)?;
            let t = &mut f.algebras[0].multiplication;
            t.retain(|x| (x.0, x.1, x.2, x.3, x.4) != (e.0, e.1, e.2, e.3, e.4));
            label = format!("algebra product {e:?}");
            t.push(e);
        }
        1 => {
            let e = random_diff(&mut rng, 0, &alg_dims)?;
            let t = &mut f.algebras[0].differential;
            t.retain(|x| (x.0, x.1, x.2) != (e.0, e.1, e.2));
            label = format!("algebra differential {e:?}");
            t.push(e);
        }
        2 => {
            let k = rng.gen_range(0..alg_dims[0]);
            let v = value(&mut rng);
            let u = &mut f.algebras[0].unit;
            u.retain(|x| x.0 != k);
            label = format!("unit ({k}, {v})");
            u.push(VectorEntry(k, v));
        }
        3 => {
            let cert = f.algebras[0].locality.as_mut()?;
            let g = rng.gen_range(0..cert.ideal.len().max(1));
            let k = rng.gen_range(0..alg_dims[0]);
            let v = value(&mut rng);
            let vec = cert.ideal.get_mut(g)?;
            vec.retain(|x| x.0 != k);
            label = format!("certificate vector {g} ({k}, {v})");
            vec.push(VectorEntry(k, v));
        }
        4 => {
            let md = f.modules.get_mut(m)?;
            let e = random_product(&mut rng, &alg_dims, md.lo, &md.dims)?;
            md.action.retain(|x| (x.0, x.1, x.2, x.3, x.4) != (e.0, e.1, e.2, e.3, e.4));
            label = format!("action on {} {e:?}", md.name);
            md.action.push(e);
        }
        _ => {
            let md = f.modules.get_mut(m)?;
            let e = random_diff(&mut rng, md.lo, &md.dims)?;
            md.differential.retain(|x| (x.0, x.1, x.2) != (e.0, e.1, e.2));
            label = format!("differential of {} {e:?}", md.name);
            md.differential.push(e);
        }
    }
    Some((f, label))
}

/// Failing validators by object, each with the axiom it names.
pub fn rejections(file: &DefinitionFile) -> BTreeMap<String, String> {
    let f = PrimeField::new(P as u32).unwrap();
    let loaded = load(&f, file, &Loaded::default()).expect("mutations keep shapes");
    let a = &loaded.algebras[0].1;
    let mut reports: Vec<(String, VerdictReport)> = vec![("algebra".into(), validate_dg_algebra(a))];
    if a.locality().is_some() {
        reports.push(("locality".into(), validate_locality(a)));
    }
    for (_, m) in &loaded.modules {
        reports.push((format!("module {}", m.name), validate_dg_module(&m.module)));
    }
    reports
        .into_iter()
        .filter(|(_, r)| !r.is_holds())
        .map(|(o, r)| {
            let axiom = r.parameters.get("axiom").cloned().unwrap_or_else(|| format!("unnamed: {:?}", r.reason));
            (o, axiom)
        })
        .collect()
}

/// Compares a verdict at `D` with its recomputation at a larger bound: the
/// larger run may only settle what was inconclusive, and witness tables must
/// agree on the common window. Parts are compared in order.
pub fn window_agree(small: &dgmod::VerdictReport, large: &dgmod::VerdictReport) -> Result<(), String> {
    use dgmod::Verdict::Inconclusive;
    let name = &small.check;
    if small.verdict != Inconclusive && small.verdict != large.verdict {
        return Err(format!("{name}: {} at D but {} at D+2", small.verdict, large.verdict));
    }
    let common = small.window.intersect(&large.window);
    for (table, a) in &small.witnesses {
        let Some(b) = large.witnesses.get(table) else { continue };
        for (n, x) in a {
            if common.contains(*n) {
                if let Some(y) = b.get(n) {
                    if x != y {
                        return Err(format!("{name}: {table} differs at degree {n}: {x} vs {y}"));
                    }
                }
            }
        }
    }
    for (p, q) in small.parts.iter().zip(&large.parts) {
        if p.check == q.check {
            window_agree(p, q)?;
        }
    }
    Ok(())
}
