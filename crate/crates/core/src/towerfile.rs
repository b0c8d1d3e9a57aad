//! Tower files, certificates and the dimension cap.
//!
//! A tower file is TOML with a `field` key (`"Q"` or `"F<p>"`) and one of
//! three bodies:
//!
//! ```toml
//! field = "Q"
//! [groups]
//! G = ["(1 2 3 4)", "(1 2)"]
//! H = ["(1 2 3)", "(2 3 4)"]
//! K = ["(1 2)(3 4)", "(1 3)(2 4)"]
//! ```
//!
//! ```toml
//! field = "Q"
//! [algebra.A]
//! basis = ["1", "i", "j", "k"]
//! unit = "1"
//! products = { "i*i" = "-1", "i*j" = "k", "j*i" = "-k" }   # and so on
//! [algebra.B]
//! span = ["1", "i"]
//! [algebra.C]
//! span = ["1"]
//! ```
//!
//! `[algebra.A]` may instead name a `preset`: `quaternion(a, b)`,
//! `matrix(n)` or `field(n)` (the degree `n` extension of `F_p`). Products
//! left out of the table are zero. `B` and `C` are spans of elements of `A`.
//!
//! ```toml
//! field = "Q"
//! [[groupoid]]
//! objects = 2
//! group = ["(1 2)"]
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};
use toml::Spanned;

use crate::algebra::{Algebra, Tower};
use crate::builders::{finite_field_algebra, matrix_algebra, quaternion_algebra, tower_from_chain, GroupoidComponent};
use crate::depth::{QuasibaseSet, Side};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::galois::subtower;
use crate::groups::{FiniteGroup, Perm, SubgroupChain};
use crate::linalg::{sparse_from_dense, LinMap, Subspace};

pub const DEFAULT_MAX_DIM: usize = 700;

/// The ambient dimension cap: `DEPTHTOWER_MAX_DIM`, else 700.
pub fn max_dim() -> usize {
    std::env::var("DEPTHTOWER_MAX_DIM").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DIM)
}

pub fn check_dim(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    field: Spanned<String>,
    groups: Option<RawGroups>,
    algebra: Option<RawAlgebras>,
    groupoid: Option<Vec<RawComponent>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroups {
    #[serde(rename = "G")]
    g: Vec<Spanned<String>>,
    #[serde(rename = "H", default)]
    h: Vec<Spanned<String>>,
    #[serde(rename = "K", default)]
    k: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebras {
    #[serde(rename = "A")]
    a: RawAlgebra,
    #[serde(rename = "B")]
    b: Option<RawSpan>,
    #[serde(rename = "C")]
    c: Option<RawSpan>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    preset: Option<Spanned<String>>,
    basis: Option<Vec<String>>,
    unit: Option<Spanned<String>>,
    #[serde(default)]
    products: BTreeMap<String, Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpan {
    span: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    objects: usize,
    #[serde(default)]
    group: Vec<Spanned<String>>,
}

/// The group data behind a group-chain tower file.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub g: FiniteGroup,
    pub h: Vec<usize>,
    pub k: Vec<usize>,
}

impl GroupData {
    pub fn chain(&self) -> Result<SubgroupChain<'_>> {
        SubgroupChain::new(&self.g, self.h.clone(), self.k.clone())
    }
}

#[derive(Clone, Debug)]
pub struct TowerFile {
    pub field: Field,
    pub tower: Option<Tower>,
    pub groups: Option<GroupData>,
    pub groupoid: Option<Vec<GroupoidComponent>>,
}

struct Src<'a>(&'a str);

impl Src<'_> {
    fn line(&self, offset: usize) -> usize {
        self.0[..offset.min(self.0.len())].matches('\n').count() + 1
    }

    fn err<T>(&self, s: &Spanned<T>, msg: impl std::fmt::Display) -> Error {
        Error::Parse { line: self.line(s.span().start), msg: msg.to_string() }
    }

    fn perms(&self, xs: &[Spanned<String>]) -> Result<Vec<Perm>> {
        xs.iter().map(|x| Perm::parse(x.get_ref()).map_err(|e| self.err(x, e))).collect()
    }
}

/// Parses and validates a tower file. Every algebra and embedding is
/// re-checked on load.
pub fn parse_tower_file(text: &str) -> Result<TowerFile> {
    let src = Src(text);
    let raw: RawFile =
        toml::from_str(text).map_err(|e| Error::Parse { line: e.span().map_or(0, |s| src.line(s.start)), msg: e.message().to_string() })?;
    let field = Field::parse(raw.field.get_ref()).map_err(|e| match e {
        Error::NotPrime(_) => src.err(&raw.field, e),
        _ => src.err(&raw.field, format!("bad field descriptor '{}'", raw.field.get_ref())),
    })?;
    let bodies = [raw.groups.is_some(), raw.algebra.is_some(), raw.groupoid.is_some()].iter().filter(|b| **b).count();
    if bodies != 1 {
        return Err(Error::Parse { line: 1, msg: "expected exactly one of [groups], [algebra.*], [[groupoid]]".into() });
    }
    let mut out = TowerFile { field, tower: None, groups: None, groupoid: None };
    if let Some(gr) = raw.groups {
        let gens = src.perms(&gr.g)?;
        let g = FiniteGroup::from_permutations(&gens, max_dim())?;
        check_dim(g.order())?;
        let sub = |xs: &[Spanned<String>], name: &str| -> Result<Vec<usize>> {
            let perms = src.perms(xs)?;
            g.subgroup_from_perms(&perms).map_err(|e| match xs.first() {
                Some(x) => src.err(x, format!("{name}: {e}")),
                None => e,
            })
        };
        let h = sub(&gr.h, "H")?;
        let k = sub(&gr.k, "K")?;
        let data = GroupData { g, h, k };
        out.tower = Some(tower_from_chain(&data.chain()?, field));
        out.groups = Some(data);
    } else if let Some(al) = raw.algebra {
        let a = algebra_section(&src, &al.a, field)?;
        check_dim(a.dim())?;
        let span = |s: &Option<RawSpan>, default: Subspace| -> Result<Subspace> {
            match s {
                None => Ok(default),
                Some(s) => {
                    let elems = s
                        .span
                        .iter()
                        .map(|x| parse_element(x.get_ref(), a.labels(), field).map_err(|m| src.err(x, m)))
                        .collect::<Result<Vec<_>>>()?;
                    let sub = Subspace::span(a.dim(), field, elems.iter().cloned().chain([a.unit().to_vec()]));
                    if a.generated_subalgebra(sub.basis()) != sub {
                        let at = s.span.first().map_or(1, |x| src.line(x.span().start));
                        return Err(Error::Parse { line: at, msg: "span is not closed under multiplication".into() });
                    }
                    Ok(sub)
                }
            }
        };
        let b = span(&al.b, Subspace::full(a.dim(), field))?;
        let c = span(&al.c, b.clone())?;
        out.tower = Some(subtower(&a, &b, &c)?);
    } else if let Some(comps) = raw.groupoid {
        let mut cs = Vec::new();
        for c in &comps {
            let gens = src.perms(&c.group)?;
            let group = FiniteGroup::from_permutations(&gens, max_dim())?;
            if c.objects == 0 {
                return Err(Error::Parse {
                    line: c.group.first().map_or(1, |x| src.line(x.span().start)),
                    msg: "component with no objects".into(),
                });
            }
            cs.push(GroupoidComponent { objects: c.objects, group });
        }
        check_dim(cs.iter().map(|c| c.objects * c.objects * c.group.order()).sum())?;
        out.groupoid = Some(cs);
    }
    Ok(out)
}

pub fn load_tower_file(path: &std::path::Path) -> Result<TowerFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
    parse_tower_file(&text)
}

fn preset(s: &str, field: Field) -> std::result::Result<Algebra, String> {
    let s = s.trim();
    let (name, args) = s.split_once('(').ok_or_else(|| format!("bad preset '{s}'"))?;
    let args: Vec<i64> = args
        .strip_suffix(')')
        .ok_or_else(|| format!("bad preset '{s}'"))?
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad preset argument '{}'", x.trim())))
        .collect::<std::result::Result<_, _>>()?;
    match (name.trim(), args.as_slice(), field) {
        ("quaternion", [a, b], _) => quaternion_algebra(field, *a, *b).map_err(|e| e.to_string()),
        ("matrix", [n], _) if *n >= 1 => Ok(matrix_algebra(*n as usize, field)),
        ("field", [n], Field::Prime(p)) if *n >= 1 => finite_field_algebra(p, *n as usize).map(|x| x.0).map_err(|e| e.to_string()),
        ("field", _, Field::Rational) => Err("preset field(n) needs a prime field".into()),
        _ => Err(format!("unknown preset '{s}'")),
    }
}

fn algebra_section(src: &Src, raw: &RawAlgebra, field: Field) -> Result<Algebra> {
    if let Some(p) = &raw.preset {
        if raw.basis.is_some() || !raw.products.is_empty() {
            return Err(src.err(p, "a preset cannot be combined with basis or products"));
        }
        return preset(p.get_ref(), field).map_err(|m| src.err(p, m));
    }
    let labels = raw.basis.clone().ok_or_else(|| Error::Parse { line: 1, msg: "[algebra.A] needs a preset or a basis".into() })?;
    let d = labels.len();
    check_dim(d)?;
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || labels[..i].contains(l) || l.contains(['*', '+', '-', '/', ' ']) {
            return Err(Error::Parse { line: 1, msg: format!("bad or repeated basis label '{l}'") });
        }
    }
    let mut mult = vec![vec![Vec::new(); d]; d];
    for (key, val) in &raw.products {
        let (x, y) = key.split_once('*').ok_or_else(|| src.err(val, format!("product key '{key}' is not of the form x*y")))?;
        let idx =
            |t: &str| labels.iter().position(|l| l == t.trim()).ok_or_else(|| src.err(val, format!("unknown basis label '{}'", t.trim())));
        let (i, j) = (idx(x)?, idx(y)?);
        mult[i][j] = sparse_from_dense(&parse_element(val.get_ref(), &labels, field).map_err(|m| src.err(val, m))?);
    }
    let unit = match &raw.unit {
        Some(u) => parse_element(u.get_ref(), &labels, field).map_err(|m| src.err(u, m))?,
        None => return Err(Error::Parse { line: 1, msg: "[algebra.A] needs a unit".into() }),
    };
    Algebra::new(field, labels, mult, unit, None)
}

/// Parses a linear combination of basis labels such as `2*k - 1/2*i + 3`.
/// A bare scalar is a multiple of the first basis element.
pub fn parse_element(s: &str, labels: &[String], field: Field) -> std::result::Result<Vec<Scalar>, String> {
    let mut out = vec![field.zero(); labels.len()];
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' {
            neg = !neg;
        } else if ch != '+' {
            cur.push(ch);
        }
    }
    if cur.trim().is_empty() {
        return Err(format!("empty term in '{s}'"));
    }
    terms.push((neg, cur));
    for (neg, term) in terms {
        let term = term.trim();
        let (coeff, label) = match term.split_once('*') {
            Some((c, l)) => (Some(c.trim()), l.trim()),
            None if labels.iter().any(|l| l == term) => (None, term),
            None => (Some(term), labels.first().map(String::as_str).unwrap_or("")),
        };
        let c = match coeff {
            Some(c) => field.parse_scalar(c).map_err(|_| format!("bad coefficient '{c}'"))?,
            None => field.one(),
        };
        let c = if neg { c.neg() } else { c };
        let i = labels.iter().position(|l| l == label).ok_or_else(|| format!("unknown basis label '{label}'"))?;
        out[i] = out[i].add(&c);
    }
    Ok(out)
}

fn map_json(f: &LinMap) -> Value {
    let m = f.to_matrix();
    Value::Array((0..m.rows).map(|i| Value::Array(m.row(i).iter().map(|x| json!(x.to_string())).collect())).collect())
}

/// Quasibases as exact matrices and vectors of scalar strings.
pub fn quasibase_certificate(qb: &QuasibaseSet) -> Value {
    json!({
        "side": match qb.side { Side::Right => "right", Side::Left => "left" },
        "maps": qb.maps.iter().map(map_json).collect::<Vec<_>>(),
        "elems": qb.elems.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `sha256` of the compact JSON rendering of the certificate.
pub fn certificate_hash(qb: &QuasibaseSet) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(quasibase_certificate(qb).to_string()))
}

/// Reads back `quasibase_certificate` output.
pub fn quasibases_from_certificate(v: &Value, field: Field) -> Result<QuasibaseSet> {
    let bad = |m: &str| Error::Parse { line: 0, msg: format!("certificate: {m}") };
    let side = match v["side"].as_str() {
        Some("right") => Side::Right,
        Some("left") => Side::Left,
        _ => return Err(bad("missing side")),
    };
    let scalars = |v: &Value| -> Result<Vec<Scalar>> {
        v.as_array().ok_or_else(|| bad("expected an array"))?.iter().map(|x| field.parse_scalar(x.as_str().unwrap_or("?"))).collect()
    };
    let maps = v["maps"]
        .as_array()
        .ok_or_else(|| bad("missing maps"))?
        .iter()
        .map(|m| {
            let rows = m.as_array().ok_or_else(|| bad("map is not a matrix"))?.iter().map(scalars).collect::<Result<Vec<_>>>()?;
            let cols = rows.first().map_or(0, Vec::len);
            Ok(LinMap::from_matrix(&crate::linalg::Matrix::from_rows(rows, cols, field)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let elems = v["elems"].as_array().ok_or_else(|| bad("missing elems"))?.iter().map(scalars).collect::<Result<Vec<_>>>()?;
    Ok(QuasibaseSet { side, maps, elems })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::{extract_quasibases, verify_quasibases};

    #[test]
    fn group_file() {
        let f = parse_tower_file("field = \"Q\"\n[groups]\nG = [\"(1 2 3)\", \"(1 2)\"]\nH = [\"(1 2 3)\"]\nK = []\n").unwrap();
        assert_eq!(f.tower.unwrap().a.dim(), 6);
        assert_eq!(f.groups.unwrap().h.len(), 3);
    }

    #[test]
    fn bad_cycle_names_token_and_line() {
        let e = parse_tower_file("field = \"Q\"\n[groups]\nG = [\"(1 2 3)\",\n  \"(1 x)\"]\n").unwrap_err();
        match e {
            Error::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains('x'), "{msg}");
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn quaternion_file() {
        let text = r#"
field = "Q"
[algebra.A]
basis = ["1", "i", "j", "k"]
unit = "1"
[algebra.A.products]
"1*1" = "1"
"1*i" = "i"
"1*j" = "j"
"1*k" = "k"
"i*1" = "i"
"j*1" = "j"
"k*1" = "k"
"i*i" = "-1"
"j*j" = "-1"
"k*k" = "-1"
"i*j" = "k"
"j*i" = "-k"
"j*k" = "i"
"k*j" = "-i"
"k*i" = "j"
"i*k" = "-j"
[algebra.B]
span = ["i"]
[algebra.C]
span = []
"#;
        let t = parse_tower_file(text).unwrap().tower.unwrap();
        let preset = quaternion_algebra(Field::Rational, -1, -1).unwrap();
        assert_eq!(t.a.dense_constants(), preset.dense_constants());
        assert_eq!((t.b.dim(), t.c.dim()), (2, 1));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let text = "field = \"F2\"\n[algebra.A]\nbasis = [\"1\", \"x\"]\nunit = \"1\"\nproducts = { \"1*1\" = \"1\", \"1*x\" = \"x\", \"x*1\" = \"x\", \"x*x\" = \"1 + x\" }\n";
        assert!(parse_tower_file(text).is_ok());
        let bad = text.replace("\"x*1\" = \"x\"", "\"x*1\" = \"1\"");
        assert!(parse_tower_file(&bad).is_err());
    }

    #[test]
    fn elements_parse() {
        let l: Vec<String> = ["1", "i", "j"].iter().map(|s| s.to_string()).collect();
        let q = Field::Rational;
        assert_eq!(parse_element("2*j - 1/2*i + 3", &l, q).unwrap(), vec![q.from_i64(3), q.frac(-1, 2), q.from_i64(2)]);
        assert_eq!(parse_element("-i", &l, q).unwrap(), vec![q.zero(), q.from_i64(-1), q.zero()]);
        assert!(parse_element("2*z", &l, q).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let t = parse_tower_file("field = \"Q\"\n[groups]\nG = [\"(1 2 3)\", \"(1 2)\"]\nH = [\"(1 2 3)\"]\n").unwrap().tower.unwrap();
        let qb = extract_quasibases(&t, Side::Right).unwrap();
        let back = quasibases_from_certificate(&quasibase_certificate(&qb), Field::Rational).unwrap();
        assert_eq!(back.maps, qb.maps);
        assert!(verify_quasibases(&t, &back).unwrap().is_verified());
    }
}
