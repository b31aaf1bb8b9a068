//! Built-in structures with exact data and matrix models, plus the JSON
//! file format for user structures.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::MatrixModel;
use crate::lie::LieAlgebra;
use crate::linalg::{unit, Matrix, Vector};
use num_traits::Zero;

use crate::scalar::{parse_rational, rational_from_f64, Rational, Scalar, DEFAULT_TOL};
use crate::structure::SubRiemannianStructure;
use crate::tensor::Tensor3;

/// Ids accepted by [`builtin`]; `abelian_<n>` and
/// `milnor_unimodular(l1,l2,l3)` are parametrized.
pub const BUILTIN_IDS: [&str; 12] = [
    "abelian_3",
    "heis3",
    "engel",
    "so3",
    "su2_scaled",
    "sl2_elliptic",
    "sl2_hyperbolic",
    "hyperbolic_plane_algebra",
    "liu_sussman_A",
    "liu_sussman_B",
    "hopf_su2",
    "milnor_unimodular(1,2,3)",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Quoted from the literature.
    Published,
    /// Worked out by hand.
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedValue {
    pub value: String,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub structure: SubRiemannianStructure<Rational>,
    pub matrix_model: Option<MatrixModel<Rational>>,
    pub expected: BTreeMap<String, ExpectedValue>,
}

impl CatalogEntry {
    pub fn algebra(&self) -> &LieAlgebra<Rational> {
        self.structure.algebra()
    }

    pub fn expected(&self, key: &str) -> Option<&str> {
        self.expected.get(key).map(|e| e.value.as_str())
    }

    pub fn model(&self) -> Result<&MatrixModel<Rational>> {
        self.matrix_model
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("{} has no matrix model", self.id)))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&EntryJson::from_entry(self)).expect("entry serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: EntryJson = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            entry: peek_name(text),
            message: format!("{}: {}", e.path(), e.inner()),
        })?;
        raw.into_entry()
    }
}

fn peek_name(text: &str) -> String {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.get("name").and_then(|n| n.as_str()).map(str::to_owned))
        .unwrap_or_else(|| "<unnamed>".into())
}

pub fn load(path: impl AsRef<Path>) -> Result<CatalogEntry> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    CatalogEntry::from_json(&text)
}

pub fn save(entry: &CatalogEntry, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, entry.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------- JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Text(String),
    Number(serde_json::Number),
}

impl Num {
    fn of(q: &Rational) -> Self {
        Num::Text(q.to_report_string())
    }

    fn value(&self) -> Result<Rational> {
        match self {
            Num::Text(s) => parse_rational(s),
            Num::Number(n) => match (n.as_i64(), n.as_f64()) {
                (Some(i), _) => Ok(Rational::from_i64(i)),
                (None, Some(f)) => rational_from_f64(f),
                _ => Err(Error::Parse(format!("unsupported number {n}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    k: usize,
    coeff: Num,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketJson {
    i: usize,
    j: usize,
    terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MetricJson {
    Named(String),
    Rows(Vec<Vec<Num>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MatrixJson {
    Rows(Vec<Vec<Num>>),
    Flat(Vec<Num>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    rep_dim: usize,
    basis: Vec<MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryJson {
    name: String,
    dimension: usize,
    brackets: Vec<BracketJson>,
    metric: MetricJson,
    distribution: Vec<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rigging: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix_model: Option<ModelJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expected: BTreeMap<String, ExpectedValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis_labels: Option<Vec<String>>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

impl EntryJson {
    fn from_entry(e: &CatalogEntry) -> Self {
        let s = &e.structure;
        let a = s.algebra();
        let n = a.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let terms: Vec<TermJson> = (0..n)
                    .filter(|&k| !a.c(i, j, k).is_zero())
                    .map(|k| TermJson {
                        k: k + 1,
                        coeff: Num::of(a.c(i, j, k)),
                    })
                    .collect();
                if !terms.is_empty() {
                    brackets.push(BracketJson { i: i + 1, j: j + 1, terms });
                }
            }
        }
        let vecs = |vs: &[Vector<Rational>]| -> Vec<Vec<Num>> { vs.iter().map(|v| v.iter().map(Num::of).collect()).collect() };
        let rows = |m: &Matrix<Rational>| -> Vec<Vec<Num>> { (0..m.rows()).map(|r| m.row(r).iter().map(Num::of).collect()).collect() };
        let metric = if *s.gram() == Matrix::identity(n) {
            MetricJson::Named("identity".into())
        } else {
            MetricJson::Rows(rows(s.gram()))
        };
        let default_rigging = s.distribution().orthogonal_complement(s.gram());
        let rigging = if default_rigging == *s.rigging() {
            None
        } else {
            Some(vecs(s.rigging().basis()))
        };
        Self {
            name: e.id.clone(),
            dimension: n,
            brackets,
            metric,
            distribution: vecs(s.distribution().basis()),
            rigging,
            matrix_model: e.matrix_model.as_ref().map(|m| ModelJson {
                rep_dim: m.rep_dim(),
                basis: m.basis().iter().map(|b| MatrixJson::Rows(rows(b))).collect(),
            }),
            expected: e.expected.clone(),
            basis_labels: (a.labels() != default_labels(n).as_slice()).then(|| a.labels().to_vec()),
        }
    }

    fn into_entry(self) -> Result<CatalogEntry> {
        let name = self.name.clone();
        let fail = |message: String| Error::Schema {
            entry: name.clone(),
            message,
        };
        let n = self.dimension;
        if !(crate::lie::MIN_DIM..=crate::lie::MAX_DIM).contains(&n) {
            return Err(fail(format!("dimension {n} is out of range")));
        }
        let num = |x: &Num, at: &str| x.value().map_err(|e| fail(format!("{at}: {e}")));
        let vector = |v: &[Num], at: &str| -> Result<Vector<Rational>> {
            if v.len() != n {
                return Err(fail(format!("{at}: expected {n} coordinates, got {}", v.len())));
            }
            v.iter().enumerate().map(|(k, x)| num(x, &format!("{at}[{k}]"))).collect()
        };
        let mut c: Tensor3<Rational> = Tensor3::cube(n);
        let mut seen = std::collections::BTreeSet::new();
        for (b, br) in self.brackets.iter().enumerate() {
            let at = format!("brackets[{b}]");
            if br.i < 1 || br.j > n || br.i >= br.j {
                return Err(fail(format!("{at}: need 1 <= i < j <= {n}, got i = {}, j = {}", br.i, br.j)));
            }
            if !seen.insert((br.i, br.j)) {
                return Err(fail(format!("{at}: bracket [{}, {}] listed twice", br.i, br.j)));
            }
            for (t, term) in br.terms.iter().enumerate() {
                if term.k < 1 || term.k > n {
                    return Err(fail(format!("{at}.terms[{t}]: k = {} outside 1..={n}", term.k)));
                }
                let v = num(&term.coeff, &format!("{at}.terms[{t}].coeff"))?;
                let (i, j, k) = (br.i - 1, br.j - 1, term.k - 1);
                c[(i, j, k)] = c[(i, j, k)].clone() + v.clone();
                c[(j, i, k)] = c[(j, i, k)].clone() - v;
            }
        }
        let mut algebra = LieAlgebra::new(self.name.clone(), c, DEFAULT_TOL).map_err(|e| fail(e.to_string()))?;
        if let Some(labels) = self.basis_labels {
            algebra = algebra.with_labels(labels).map_err(|e| fail(format!("basis_labels: {e}")))?;
        }
        let gram = match &self.metric {
            MetricJson::Named(s) if s == "identity" => Matrix::identity(n),
            MetricJson::Named(s) => return Err(fail(format!("metric: unknown name {s:?}"))),
            MetricJson::Rows(rows) => {
                if rows.len() != n {
                    return Err(fail(format!("metric: expected {n} rows, got {}", rows.len())));
                }
                let rows: Vec<Vector<Rational>> = rows
                    .iter()
                    .enumerate()
                    .map(|(r, row)| vector(row, &format!("metric[{r}]")))
                    .collect::<Result<_>>()?;
                Matrix::from_rows(&rows)
            }
        };
        if !gram.is_symmetric(0.0) {
            return Err(fail("metric: not symmetric".into()));
        }
        let dist: Vec<Vector<Rational>> = self
            .distribution
            .iter()
            .enumerate()
            .map(|(r, v)| vector(v, &format!("distribution[{r}]")))
            .collect::<Result<_>>()?;
        let rig: Option<Vec<Vector<Rational>>> = self
            .rigging
            .as_ref()
            .map(|vs| {
                vs.iter()
                    .enumerate()
                    .map(|(r, v)| vector(v, &format!("rigging[{r}]")))
                    .collect::<Result<_>>()
            })
            .transpose()?;
        let structure = SubRiemannianStructure::new(self.name.clone(), algebra, &dist, rig.as_deref(), gram, DEFAULT_TOL)
            .map_err(|e| fail(e.to_string()))?;
        let matrix_model = match self.matrix_model {
            None => None,
            Some(m) => {
                let r = m.rep_dim;
                let mut basis = Vec::with_capacity(m.basis.len());
                for (b, mj) in m.basis.iter().enumerate() {
                    let at = format!("matrix_model.basis[{b}]");
                    let flat: Vec<&Num> = match mj {
                        MatrixJson::Rows(rows) => {
                            if rows.len() != r || rows.iter().any(|row| row.len() != r) {
                                return Err(fail(format!("{at}: expected {r} x {r}")));
                            }
                            rows.iter().flatten().collect()
                        }
                        MatrixJson::Flat(v) => {
                            if v.len() != r * r {
                                return Err(fail(format!("{at}: expected {} entries", r * r)));
                            }
                            v.iter().collect()
                        }
                    };
                    let data = flat.iter().map(|x| num(x, &at)).collect::<Result<Vec<_>>>()?;
                    basis.push(Matrix::from_row_major(r, r, data).map_err(|e| fail(e.to_string()))?);
                }
                Some(MatrixModel::new(structure.algebra(), basis, DEFAULT_TOL).map_err(|e| fail(e.to_string()))?)
            }
        };
        Ok(CatalogEntry {
            id: self.name,
            structure,
            matrix_model,
            expected: self.expected,
        })
    }
}

// ------------------------------------------------------------ builtins

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn qv(v: &[i64]) -> Vector<Rational> {
    v.iter().map(|&x| q(x)).collect()
}

fn int_matrix(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(&rows.iter().map(|r| qv(r)).collect::<Vec<_>>())
}

/// `E_rc` of size `n`.
fn elementary(n: usize, r: usize, c: usize) -> Matrix<Rational> {
    Matrix::from_fn(n, n, |i, j| if (i, j) == (r, c) { q(1) } else { q(0) })
}

/// `(L_k)_ij = -eps_kij`, so `[L_i, L_j] = eps_ijk L_k`.
fn so3_generator(k: usize, size: usize) -> Matrix<Rational> {
    Matrix::from_fn(size, size, |i, j| {
        if i >= 3 || j >= 3 {
            return q(0);
        }
        let eps = match (k, i, j) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
            (0, 2, 1) | (1, 0, 2) | (2, 1, 0) => -1,
            _ => 0,
        };
        q(-eps)
    })
}

fn cyclic_brackets(l: [Rational; 3]) -> Vec<(usize, usize, Vec<(usize, Rational)>)> {
    let [l1, l2, l3] = l;
    vec![(1, 2, vec![(0, l1)]), (0, 2, vec![(1, -l2)]), (0, 1, vec![(2, l3)])]
}

fn expected(items: &[(&str, &str, Origin)]) -> BTreeMap<String, ExpectedValue> {
    items
        .iter()
        .map(|(k, v, o)| {
            (
                k.to_string(),
                ExpectedValue {
                    value: v.to_string(),
                    origin: *o,
                },
            )
        })
        .collect()
}

struct Draft {
    algebra: LieAlgebra<Rational>,
    distribution: Vec<Vector<Rational>>,
    rigging: Option<Vec<Vector<Rational>>>,
    gram: Option<Matrix<Rational>>,
    model: Option<Vec<Matrix<Rational>>>,
    expected: BTreeMap<String, ExpectedValue>,
}

impl Draft {
    fn new(algebra: LieAlgebra<Rational>, distribution: Vec<Vector<Rational>>) -> Self {
        Self {
            algebra,
            distribution,
            rigging: None,
            gram: None,
            model: None,
            expected: BTreeMap::new(),
        }
    }

    fn model(mut self, m: Vec<Matrix<Rational>>) -> Self {
        self.model = Some(m);
        self
    }

    fn expect(mut self, items: &[(&str, &str, Origin)]) -> Self {
        self.expected = expected(items);
        self
    }

    fn build(self, id: &str) -> Result<CatalogEntry> {
        let n = self.algebra.dim();
        let gram = self.gram.unwrap_or_else(|| Matrix::identity(n));
        let algebra = self.algebra.with_name(id);
        let structure = SubRiemannianStructure::new(
            id,
            algebra,
            &self.distribution,
            self.rigging.as_deref(),
            gram,
            DEFAULT_TOL,
        )?;
        let matrix_model = self
            .model
            .map(|m| MatrixModel::new(structure.algebra(), m, DEFAULT_TOL))
            .transpose()?;
        Ok(CatalogEntry {
            id: id.to_string(),
            structure,
            matrix_model,
            expected: self.expected,
        })
    }
}

fn e(n: usize, i: usize) -> Vector<Rational> {
    unit(n, i)
}

fn liu_sussman(second_rigging: &[i64], id: &str) -> Result<CatalogEntry> {
    // basis k1, k2, k3, z
    let algebra = LieAlgebra::from_brackets(
        id,
        4,
        &[(0, 1, vec![(2, q(1))]), (1, 2, vec![(0, q(1))]), (0, 2, vec![(1, q(-1))])],
    )?
    .with_labels(vec!["k1".into(), "k2".into(), "k3".into(), "z".into()])?;
    let f = qv(&[1, 0, 0, 1]);
    let g = qv(&[1, 1, 0, 2]);
    let k3 = qv(&[0, 0, 1, 0]);
    let w = qv(second_rigging);
    let p = Matrix::from_cols(4, &[f.clone(), g.clone(), k3.clone(), w.clone()]);
    let pinv = p.inverse()?;
    let gram = pinv.transpose().mul(&pinv);
    let mut model: Vec<Matrix<Rational>> = (0..3).map(|k| so3_generator(k, 5)).collect();
    model.push(elementary(5, 3, 4));
    let mut draft = Draft::new(algebra, vec![f, g]).model(model);
    draft.rigging = Some(vec![k3, w]);
    draft.gram = Some(gram);
    let draft = if id.ends_with('A') {
        draft.expect(&[
            ("sectional", "3/2", Origin::Published),
            ("ricci", "3/2,3/2", Origin::Analytic),
            ("scalar", "3", Origin::Analytic),
        ])
    } else {
        draft.expect(&[("sectional", "1", Origin::Published)])
    };
    draft.build(id)
}

fn parse_milnor(id: &str) -> Option<Result<[Rational; 3]>> {
    let inner = id.strip_prefix("milnor_unimodular(")?.strip_suffix(')')?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Some(Err(Error::UnknownEntry(format!("{id}: expected three parameters"))));
    }
    let vals: Result<Vec<Rational>> = parts.iter().map(|p| parse_rational(p)).collect();
    Some(vals.map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]))
}

fn milnor(id: &str, l: [Rational; 3]) -> Result<CatalogEntry> {
    if l[2].is_zero() {
        return Err(Error::Precondition(format!(
            "{id}: [e1, e2] = 0 leaves span(e1, e2) involutive"
        )));
    }
    let algebra = LieAlgebra::from_brackets(id, 3, &cyclic_brackets(l.clone()))?;
    let model = if l[0].is_zero() && l[1].is_zero() {
        vec![
            elementary(3, 0, 1),
            elementary(3, 1, 2),
            elementary(3, 0, 2).scale(&(q(1) / l[2].clone())),
        ]
    } else {
        (0..3)
            .map(|k| algebra.ad_matrix(&unit(3, k)))
            .collect::<Result<Vec<_>>>()?
    };
    Draft::new(algebra, vec![e(3, 0), e(3, 1)]).model(model).build(id)
}

fn abelian(id: &str, n: usize) -> Result<CatalogEntry> {
    if !(crate::lie::MIN_DIM..=crate::lie::MAX_DIM - 1).contains(&n) {
        return Err(Error::UnknownEntry(format!("{id}: dimension out of range")));
    }
    let algebra = LieAlgebra::new(id, Tensor3::cube(n), DEFAULT_TOL)?;
    let model = (0..n).map(|k| elementary(n + 1, k, n)).collect();
    Draft::new(algebra, (0..n).map(|i| e(n, i)).collect())
        .model(model)
        .expect(&[("curvature", "0", Origin::Analytic)])
        .build(id)
}

/// Looks up a built-in entry by id.
pub fn builtin(id: &str) -> Result<CatalogEntry> {
    if let Some(rest) = id.strip_prefix("abelian_") {
        let n: usize = rest
            .parse()
            .map_err(|_| Error::UnknownEntry(format!("{id}: expected abelian_<n>")))?;
        return abelian(id, n);
    }
    if let Some(l) = parse_milnor(id) {
        return milnor(id, l?);
    }
    let so3_brackets = || cyclic_brackets([q(1), q(1), q(1)]);
    match id {
        "heis3" => Draft::new(
            LieAlgebra::from_brackets(id, 3, &[(0, 1, vec![(2, q(1))])])?,
            vec![e(3, 0), e(3, 1)],
        )
        .model(vec![elementary(3, 0, 1), elementary(3, 1, 2), elementary(3, 0, 2)])
        .expect(&[
            ("curvature", "0", Origin::Published),
            ("classify_3d", "contact_admitting", Origin::Published),
            ("reeb", "e3", Origin::Analytic),
        ])
        .build(id),
        "engel" => {
            let e1 = elementary(4, 1, 0).add(&elementary(4, 2, 1));
            Draft::new(
                LieAlgebra::from_brackets(id, 4, &[(0, 1, vec![(2, q(1))]), (0, 2, vec![(3, q(1))])])?,
                vec![e(4, 0), e(4, 1)],
            )
            .model(vec![e1, elementary(4, 0, 3), elementary(4, 1, 3), elementary(4, 2, 3)])
            .expect(&[
                ("curvature", "0", Origin::Published),
                ("growth_vector", "2,3,4", Origin::Analytic),
            ])
            .build(id)
        }
        "so3" => Draft::new(LieAlgebra::from_brackets(id, 3, &so3_brackets())?, vec![e(3, 0), e(3, 1)])
            .model((0..3).map(|k| so3_generator(k, 3)).collect())
            .expect(&[
                ("ambient_sectional", "1/4", Origin::Analytic),
                ("sectional", "1", Origin::Analytic),
                ("classify_3d", "contact_admitting", Origin::Published),
                ("reeb", "e3", Origin::Published),
            ])
            .build(id),
        "su2_scaled" => Draft::new(
            LieAlgebra::from_brackets(id, 3, &cyclic_brackets([q(2), q(2), q(2)]))?,
            vec![e(3, 0), e(3, 1)],
        )
        .model((0..3).map(|k| so3_generator(k, 3).scale(&q(2))).collect())
        .expect(&[
            ("ambient_sectional", "1", Origin::Analytic),
            ("sectional", "4", Origin::Analytic),
        ])
        .build(id),
        "hopf_su2" => {
            // realification of -i sigma_k
            let m1 = int_matrix(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]]);
            let m2 = int_matrix(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
            let m3 = int_matrix(&[&[0, 0, 1, 0], &[0, 0, 0, -1], &[-1, 0, 0, 0], &[0, 1, 0, 0]]);
            Draft::new(
                LieAlgebra::from_brackets(id, 3, &cyclic_brackets([q(2), q(2), q(2)]))?,
                vec![e(3, 0), e(3, 1)],
            )
            .model(vec![m1, m2, m3])
            .expect(&[
                ("ambient_sectional", "1", Origin::Analytic),
                ("base_sectional", "4", Origin::Analytic),
            ])
            .build(id)
        }
        "sl2_elliptic" | "sl2_hyperbolic" => {
            let algebra = LieAlgebra::from_brackets(id, 3, &cyclic_brackets([q(1), q(1), q(-1)]))?;
            let half = |m: &[&[i64]]| int_matrix(m).scale(&Rational::from_ratio(1, 2));
            let model = vec![
                half(&[&[0, 1], &[1, 0]]),
                half(&[&[1, 0], &[0, -1]]),
                half(&[&[0, 1], &[-1, 0]]),
            ];
            let (d, reeb) = if id == "sl2_elliptic" {
                (vec![e(3, 0), e(3, 1)], "e3")
            } else {
                (vec![e(3, 1), e(3, 2)], "e1")
            };
            Draft::new(algebra, d)
                .model(model)
                .expect(&[
                    ("classify_3d", "contact_admitting", Origin::Published),
                    ("reeb", reeb, Origin::Published),
                ])
                .build(id)
        }
        "hyperbolic_plane_algebra" => Draft::new(
            LieAlgebra::from_brackets(id, 3, &[(0, 1, vec![(1, q(1))]), (0, 2, vec![(2, q(1))])])?,
            vec![e(3, 0), e(3, 1)],
        )
        .model(vec![elementary(3, 0, 0), elementary(3, 0, 1), elementary(3, 0, 2)])
        .expect(&[("classify_3d", "no_nonholonomic_rank2", Origin::Published)])
        .build(id),
        "liu_sussman_A" => liu_sussman(&[0, 0, 0, -1], id),
        "liu_sussman_B" => liu_sussman(&[0, -1, 0, 0], id),
        _ => Err(Error::UnknownEntry(id.to_string())),
    }
}

/// All default built-ins in [`BUILTIN_IDS`] order.
pub fn all_builtins() -> Result<Vec<CatalogEntry>> {
    BUILTIN_IDS.iter().map(|id| builtin(id)).collect()
}

/// Families for seeded random structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomFamily {
    /// Nilpotent, `D` the first layer, rigging `[g, g]`: condition 3 holds.
    /// Even indices are step two with random brackets, odd indices a
    /// rescaled free step-three algebra of rank two.
    NilpotentCond3,
    /// A built-in algebra under a random integer change of basis, identity
    /// metric, `D` the first `m` coordinates.
    ChangeOfBasis,
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64))
}

/// The `index`-th structure of a family; deterministic in `(seed, index)`.
pub fn random_structure(family: RandomFamily, seed: u64, index: usize) -> Result<SubRiemannianStructure<Rational>> {
    let mut rng = rng_for(seed, index);
    let name = format!("random_{index}");
    match family {
        RandomFamily::NilpotentCond3 => {
            let (n, m, brackets) = if index % 2 == 0 {
                let m = rng.gen_range(2..=4usize);
                let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
                let p = rng.gen_range(1..=pairs.len().min(3));
                let n = m + p;
                loop {
                    let br: Vec<(usize, usize, Vec<(usize, Rational)>)> = pairs
                        .iter()
                        .map(|&(i, j)| (i, j, (m..n).map(|k| (k, q(rng.gen_range(-2..=2i64)))).collect()))
                        .collect();
                    let rows: Vec<Vector<Rational>> =
                        br.iter().map(|(_, _, t)| t.iter().map(|(_, v)| v.clone()).collect()).collect();
                    if Matrix::from_rows(&rows).rank() == p {
                        break (n, m, br);
                    }
                }
            } else {
                let mut nz = || {
                    let v = rng.gen_range(1..=3i64);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                };
                let (a, b, c) = (nz(), nz(), nz());
                (
                    5,
                    2,
                    vec![(0, 1, vec![(2, q(a))]), (0, 2, vec![(3, q(b))]), (1, 2, vec![(4, q(c))])],
                )
            };
            let algebra = LieAlgebra::from_brackets(name.clone(), n, &brackets)?;
            // squares keep the adapted frame rational
            let diag: Vec<Rational> = (0..n).map(|_| q(rng.gen_range(1..=3i64).pow(2))).collect();
            let d: Vec<Vector<Rational>> = (0..m).map(|i| e(n, i)).collect();
            SubRiemannianStructure::new(name, algebra, &d, None, Matrix::diagonal(&diag), DEFAULT_TOL)
        }
        RandomFamily::ChangeOfBasis => {
            let pool: Vec<CatalogEntry> = all_builtins()?.into_iter().filter(|x| x.structure.n() >= 3).collect();
            let base = pool[rng.gen_range(0..pool.len())].algebra().clone();
            let n = base.dim();
            let p = loop {
                let vals: Vec<Rational> = (0..n * n).map(|_| q(rng.gen_range(-2..=2i64))).collect();
                let p = Matrix::from_row_major(n, n, vals)?;
                if !p.determinant().is_zero() {
                    break p;
                }
            };
            let algebra = base.change_basis(&p)?.with_name(name.clone());
            let m = rng.gen_range(2..n);
            let d: Vec<Vector<Rational>> = (0..m).map(|i| e(n, i)).collect();
            SubRiemannianStructure::new(name, algebra, &d, None, Matrix::identity(n), DEFAULT_TOL)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_is_valid() {
        for entry in all_builtins().unwrap() {
            let s = &entry.structure;
            assert!(entry.matrix_model.is_some(), "{}", entry.id);
            s.algebra().validate(0.0).unwrap();
            if entry.id != "hyperbolic_plane_algebra" {
                assert!(s.is_bracket_generating(), "{}", entry.id);
            }
        }
        assert!(builtin("abelian_3").unwrap().algebra().is_abelian());
        assert!(matches!(builtin("nope"), Err(Error::UnknownEntry(_))));
        assert!(builtin("milnor_unimodular(1,1,0)").is_err());
        assert!(builtin("milnor_unimodular(0,0,2)").unwrap().matrix_model.is_some());
        assert!(builtin("milnor_unimodular(1,-1,1/2)").is_ok());
    }

    #[test]
    fn liu_sussman_brackets() {
        let entry = builtin("liu_sussman_A").unwrap();
        let a = entry.algebra();
        let f = qv(&[1, 0, 0, 1]);
        let g = qv(&[1, 1, 0, 2]);
        let fg = a.bracket(&f, &g).unwrap();
        assert_eq!(fg, qv(&[0, 0, 1, 0]));
        assert_eq!(a.bracket(&f, &fg).unwrap(), qv(&[0, -1, 0, 0]));
        let two_f_minus_g: Vector<Rational> = f.iter().zip(&g).map(|(x, y)| q(2) * x - y).collect();
        assert_eq!(a.bracket(&g, &fg).unwrap(), two_f_minus_g);
        let b = builtin("liu_sussman_B").unwrap();
        assert_eq!(entry.structure.distribution(), b.structure.distribution());
        assert_ne!(entry.structure.rigging(), b.structure.rigging());
    }

    #[test]
    fn random_families_are_reproducible() {
        for family in [RandomFamily::NilpotentCond3, RandomFamily::ChangeOfBasis] {
            for i in 0..6 {
                let a = random_structure(family, 7, i).unwrap();
                assert_eq!(a, random_structure(family, 7, i).unwrap());
                if family == RandomFamily::NilpotentCond3 {
                    assert!(a.algebra().is_nilpotent());
                    assert!(a.rigging_conditions().cond3);
                }
            }
        }
    }

    #[test]
    fn round_trip() {
        for entry in all_builtins().unwrap() {
            let text = entry.to_json();
            let back = CatalogEntry::from_json(&text).unwrap();
            assert_eq!(back, entry, "{}", entry.id);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn schema_errors_name_the_entry() {
        let text = builtin("heis3").unwrap().to_json().replace("\"k\": 3", "\"k\": 4");
        match CatalogEntry::from_json(&text) {
            Err(Error::Schema { entry, message }) => {
                assert_eq!(entry, "heis3");
                assert!(message.contains("k = 4"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let text = builtin("heis3").unwrap().to_json().replace("\"dimension\"", "\"dimensions\"");
        assert!(matches!(CatalogEntry::from_json(&text), Err(Error::Schema { .. })));
        let bad_jacobi = r#"{"name": "x", "dimension": 3, "metric": "identity",
            "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "coeff": "1"}]},
                         {"i": 1, "j": 3, "terms": [{"k": 1, "coeff": "1"}]}],
            "distribution": [["1","0","0"], ["0","1","0"]]}"#;
        assert!(matches!(CatalogEntry::from_json(bad_jacobi), Err(Error::Schema { .. })));
    }

    #[test]
    fn decimal_and_number_coefficients_are_exact() {
        let text = r#"{"name": "h", "dimension": 3, "metric": "identity",
            "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "coeff": "0.5"}]}],
            "distribution": [[1, 0, 0], [0, 1, 0]]}"#;
        let e = CatalogEntry::from_json(text).unwrap();
        assert_eq!(*e.algebra().c(0, 1, 2), Rational::from_ratio(1, 2));
        assert!(e.matrix_model.is_none());
    }
}
