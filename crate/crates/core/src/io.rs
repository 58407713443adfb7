//! JSON documents for the main types and a canonical writer.
//!
//! Canonical form: object keys sorted, no insignificant whitespace, all
//! ring scalars and torsion invariants encoded as decimal strings (with
//! "a/b" for non-integral rationals), so equal values serialize to equal
//! bytes. Documents that name a group carry either a builtin name (C{n},
//! S{n}, D{n}, V4) or an explicit multiplication table.

use crate::chains::{ChainComplex, Shape};
use crate::error::{Error, Result};
use crate::group::{configured_max_group, Group, Subgroup};
use crate::gset::GSet;
use crate::linalg::ModuleInvariants;
use crate::mackey::MackeyFunctor;
use crate::matrix::Mat;
use crate::ring::Ring;
use crate::span::{BasisKey, SpanSum};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Serialize any document in canonical form: keys sorted, stable scalar
/// encoding. Round-tripping through `serde_json::Value` sorts the keys.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::MalformedInput(format!("serialization failed: {e}")))?;
    serde_json::to_string(&v).map_err(|e| Error::MalformedInput(format!("serialization failed: {e}")))
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("bad JSON: {e}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
}

fn factorial_capped(n: usize, cap: usize) -> usize {
    let mut acc = 1usize;
    for k in 2..=n {
        acc = acc.saturating_mul(k);
        if acc > cap {
            return acc;
        }
    }
    acc
}

/// Builtin group names: C{n} cyclic, S{n} symmetric, D{n} dihedral of
/// order 2n, V4 the Klein four-group.
pub fn group_by_name(name: &str) -> Result<Arc<Group>> {
    let bound = configured_max_group();
    let check = |order: usize| {
        if order > bound {
            Err(Error::GroupTooLarge { order, bound })
        } else {
            Ok(())
        }
    };
    if name == "V4" {
        check(4)?;
        return Group::from_permutations(4, &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]], 5);
    }
    let (kind, rest) = name.split_at(1);
    let n: usize = rest
        .parse()
        .map_err(|_| Error::MalformedInput(format!("unknown group name {name:?}")))?;
    match kind {
        "C" if n >= 1 => {
            check(n)?;
            Ok(Group::cyclic(n))
        }
        "S" if n >= 1 => {
            check(factorial_capped(n, bound))?;
            Ok(Group::symmetric(n))
        }
        "D" if n >= 2 => {
            check(2 * n)?;
            Ok(Group::dihedral(n))
        }
        _ => Err(Error::MalformedInput(format!("unknown group name {name:?}"))),
    }
}

impl GroupDoc {
    pub fn named(name: &str) -> GroupDoc {
        GroupDoc { name: Some(name.into()), cayley: None }
    }

    pub fn from_group(group: &Group) -> GroupDoc {
        let n = group.order();
        let cayley = (0..n)
            .map(|a| (0..n).map(|b| group.mul(a, b)).collect())
            .collect();
        GroupDoc { name: None, cayley: Some(cayley) }
    }

    pub fn build(&self) -> Result<Arc<Group>> {
        match (&self.name, &self.cayley) {
            (Some(name), None) => group_by_name(name),
            (None, Some(table)) => {
                if table.len() > configured_max_group() {
                    return Err(Error::GroupTooLarge {
                        order: table.len(),
                        bound: configured_max_group(),
                    });
                }
                Group::from_cayley_table(table)
            }
            _ => Err(Error::MalformedInput(
                "group document needs exactly one of name, cayley".into(),
            )),
        }
    }
}

pub fn subgroup_from_elements(group: &Arc<Group>, elements: &[usize]) -> Result<Subgroup> {
    Subgroup::new(Arc::clone(group), elements.to_vec())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetDoc {
    pub size: usize,
    /// full action table, one row per group element
    pub action: Vec<Vec<usize>>,
}

impl GSetDoc {
    pub fn from_gset(x: &GSet) -> GSetDoc {
        GSetDoc { size: x.size(), action: x.action_rows() }
    }

    pub fn build(&self, group: &Arc<Group>) -> Result<GSet> {
        GSet::new(Arc::clone(group), self.size, &self.action)
    }
}

pub fn mat_entries(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.ring.format_scalar(m.get(i, j))).collect())
        .collect()
}

pub fn mat_from_entries(ring: &Ring, rows: usize, cols: usize, entries: &[Vec<String>]) -> Result<Mat> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(Error::MalformedInput(format!(
            "matrix entries are not {rows}x{cols}"
        )));
    }
    let mut m = Mat::zeros(ring.clone(), rows, cols);
    for (i, row) in entries.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            let v = ring.parse_scalar(s)?;
            if !ring.is_zero(&v) {
                m.set(i, j, v);
            }
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatDoc {
    pub fn from_mat(m: &Mat) -> MatDoc {
        MatDoc { rows: m.rows, cols: m.cols, entries: mat_entries(m) }
    }

    pub fn build(&self, ring: &Ring) -> Result<Mat> {
        mat_from_entries(ring, self.rows, self.cols, &self.entries)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanTermDoc {
    pub src_orbit: usize,
    pub tgt_orbit: usize,
    pub g: usize,
    pub l: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanSumDoc {
    pub group: GroupDoc,
    pub ring: String,
    pub source: GSetDoc,
    pub target: GSetDoc,
    pub terms: Vec<SpanTermDoc>,
}

impl SpanSumDoc {
    pub fn from_sum(group: &GroupDoc, s: &SpanSum) -> SpanSumDoc {
        let terms = s
            .terms
            .iter()
            .map(|(key, coeff)| SpanTermDoc {
                src_orbit: key.src_orbit,
                tgt_orbit: key.tgt_orbit,
                g: key.g,
                l: key.l.clone(),
                coeff: s.ring.format_scalar(coeff),
            })
            .collect();
        SpanSumDoc {
            group: group.clone(),
            ring: s.ring.name(),
            source: GSetDoc::from_gset(&s.source),
            target: GSetDoc::from_gset(&s.target),
            terms,
        }
    }

    pub fn build(&self) -> Result<SpanSum> {
        let group = self.group.build()?;
        let ring = Ring::parse(&self.ring)?;
        let source = self.source.build(&group)?;
        let target = self.target.build(&group)?;
        let mut sum = SpanSum::zero(ring.clone(), source, target);
        for t in &self.terms {
            let key = BasisKey {
                src_orbit: t.src_orbit,
                tgt_orbit: t.tgt_orbit,
                g: t.g,
                l: t.l.clone(),
            };
            sum.add_term(key, &ring.parse_scalar(&t.coeff)?);
        }
        Ok(sum)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeDoc {
    Bounded([i64; 2]),
    Periodic2(bool),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub group: GroupDoc,
    pub ring: String,
    pub shape: ShapeDoc,
    pub modules: Vec<GSetDoc>,
    pub differentials: Vec<Vec<Vec<String>>>,
}

impl ComplexDoc {
    pub fn from_complex(group: &GroupDoc, x: &ChainComplex) -> ComplexDoc {
        let shape = match x.shape {
            Shape::Bounded { lo, hi } => ShapeDoc::Bounded([lo, hi]),
            Shape::Periodic2 => ShapeDoc::Periodic2(true),
        };
        ComplexDoc {
            group: group.clone(),
            ring: x.ring.name(),
            shape,
            modules: x.modules.iter().map(GSetDoc::from_gset).collect(),
            differentials: x.diffs.iter().map(|d| mat_entries(&d.mat)).collect(),
        }
    }

    pub fn build(&self) -> Result<ChainComplex> {
        let group = self.group.build()?;
        let ring = Ring::parse(&self.ring)?;
        let modules: Vec<GSet> = self
            .modules
            .iter()
            .map(|m| m.build(&group))
            .collect::<Result<_>>()?;
        match self.shape {
            ShapeDoc::Bounded([lo, hi]) => {
                if modules.len() != self.differentials.len() + 1 {
                    return Err(Error::MalformedInput(
                        "bounded complex needs one differential less than modules".into(),
                    ));
                }
                let mats: Vec<Mat> = self
                    .differentials
                    .iter()
                    .enumerate()
                    .map(|(i, d)| {
                        mat_from_entries(&ring, modules[i].size(), modules[i + 1].size(), d)
                    })
                    .collect::<Result<_>>()?;
                ChainComplex::bounded(ring, lo, hi, modules, mats)
            }
            ShapeDoc::Periodic2(true) => {
                if modules.len() != 2 || self.differentials.len() != 2 {
                    return Err(Error::MalformedInput(
                        "2-periodic complex needs two modules and two differentials".into(),
                    ));
                }
                let d0 = mat_from_entries(
                    &ring,
                    modules[1].size(),
                    modules[0].size(),
                    &self.differentials[0],
                )?;
                let d1 = mat_from_entries(
                    &ring,
                    modules[0].size(),
                    modules[1].size(),
                    &self.differentials[1],
                )?;
                ChainComplex::periodic2(ring, modules[0].clone(), modules[1].clone(), d0, d1)
            }
            ShapeDoc::Periodic2(false) => {
                Err(Error::MalformedInput("periodic2 must be true".into()))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub k: usize,
    pub h: usize,
    pub g: usize,
    pub mat: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub group: GroupDoc,
    pub ring: String,
    pub w: Vec<usize>,
    pub values: Vec<usize>,
    pub action: Vec<ActionDoc>,
}

impl FunctorDoc {
    pub fn from_functor(group: &GroupDoc, m: &MackeyFunctor) -> FunctorDoc {
        let action = m
            .action
            .iter()
            .map(|(&(k, h, g), mat)| ActionDoc { k, h, g, mat: mat_entries(mat) })
            .collect();
        FunctorDoc {
            group: group.clone(),
            ring: m.ring.name(),
            w: m.w.elements().to_vec(),
            values: m.values.clone(),
            action,
        }
    }

    pub fn build(&self) -> Result<MackeyFunctor> {
        let group = self.group.build()?;
        let ring = Ring::parse(&self.ring)?;
        let w = subgroup_from_elements(&group, &self.w)?;
        let lattice = crate::group::subgroup_lattice(&w, configured_max_group())?;
        let classes = lattice.class_reps.len();
        if self.values.len() != classes {
            return Err(Error::MalformedInput(format!(
                "expected {classes} value ranks"
            )));
        }
        let mut action = std::collections::BTreeMap::new();
        for a in &self.action {
            if a.k >= classes || a.h >= classes {
                return Err(Error::MalformedInput(format!(
                    "action class ({}, {}) out of range",
                    a.k, a.h
                )));
            }
            let mat = mat_from_entries(&ring, self.values[a.k], self.values[a.h], &a.mat)?;
            action.insert((a.k, a.h, a.g), mat);
        }
        let functor = MackeyFunctor { ring, w, lattice, values: self.values.clone(), action };
        functor.validate()?;
        Ok(functor)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantsDoc {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl InvariantsDoc {
    pub fn from_invariants(v: &ModuleInvariants) -> InvariantsDoc {
        InvariantsDoc {
            free_rank: v.free_rank,
            torsion: v.torsion.iter().map(|t| t.to_string()).collect(),
        }
    }
}

/// Machine-readable code for an engine error, for the error JSON.
pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::NonAssociative { .. } => "non-associative",
        Error::NoIdentity { .. } => "no-identity",
        Error::InverseMissing { .. } => "inverse-missing",
        Error::GroupTooLarge { .. } => "group-too-large",
        Error::TooLarge { .. } => "too-large",
        Error::SourceTargetMismatch(_) => "source-target-mismatch",
        Error::NotNested(_) => "not-nested",
        Error::NotNormal(_) => "not-normal",
        Error::ShapeUnsupported { .. } => "shape-unsupported",
        Error::FieldRequired(_) => "field-required",
        Error::BadPrime(_) => "bad-prime",
        Error::RingMismatch(_, _) => "ring-mismatch",
        Error::MalformedInput(_) => "malformed-input",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::cp_example;
    use crate::group::all_subgroups;
    use crate::mackey::yoneda;
    use crate::span::canonicalize;

    #[test]
    fn builtin_group_names() {
        assert_eq!(group_by_name("C6").unwrap().order(), 6);
        assert_eq!(group_by_name("S3").unwrap().order(), 6);
        assert_eq!(group_by_name("D4").unwrap().order(), 8);
        assert_eq!(group_by_name("V4").unwrap().order(), 4);
        assert!(group_by_name("V4").unwrap().is_abelian());
        assert!(group_by_name("Q8").is_err());
        assert!(matches!(
            group_by_name("S9"),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn group_doc_round_trip() {
        let g = group_by_name("S3").unwrap();
        let doc = GroupDoc::from_group(&g);
        let rebuilt = doc.build().unwrap();
        assert_eq!(*g, *rebuilt);
        let named = GroupDoc::named("S3").build().unwrap();
        assert_eq!(*g, *named);
    }

    #[test]
    fn gset_doc_round_trip() {
        let g = group_by_name("S3").unwrap();
        let lat = all_subgroups(&g, 512).unwrap();
        for h in lat.rep_subgroups() {
            let x = GSet::transitive(Arc::clone(&g), h);
            let doc = GSetDoc::from_gset(&x);
            assert_eq!(doc.build(&g).unwrap(), x);
        }
    }

    #[test]
    fn matrix_entries_round_trip_with_fractions() {
        let q = Ring::Rationals;
        let mut m = Mat::zeros(q.clone(), 2, 2);
        m.set(0, 0, q.parse_scalar("-3/2").unwrap());
        m.set(1, 0, q.parse_scalar("7").unwrap());
        let doc = MatDoc::from_mat(&m);
        assert_eq!(doc.entries[0][0], "-3/2");
        assert_eq!(doc.build(&q).unwrap(), m);
    }

    #[test]
    fn span_sum_doc_round_trip() {
        let g = group_by_name("S3").unwrap();
        let lat = all_subgroups(&g, 512).unwrap();
        let k = &lat.subgroups[1];
        let x = GSet::transitive(Arc::clone(&g), k);
        let sum = canonicalize(&crate::span::Span::identity(&x), Ring::Integers).unwrap();
        let doc = SpanSumDoc::from_sum(&GroupDoc::named("S3"), &sum);
        let rebuilt = doc.build().unwrap();
        assert_eq!(rebuilt, sum);
    }

    #[test]
    fn complex_doc_round_trips_both_shapes() {
        let p = 3u64;
        let x = cp_example(p, &Ring::PrimeField(p)).unwrap();
        let doc = ComplexDoc::from_complex(&GroupDoc::named("C3"), &x);
        let rebuilt = doc.build().unwrap();
        assert_eq!(rebuilt, x);

        let g = group_by_name("C2").unwrap();
        let e = Subgroup::trivial(Arc::clone(&g));
        let free = GSet::transitive(Arc::clone(&g), &e);
        let d = Mat::from_int_rows(Ring::Integers, &[vec![-1, 1], vec![1, -1]]);
        let b =
            ChainComplex::bounded(Ring::Integers, 0, 1, vec![free.clone(), free], vec![d]).unwrap();
        let doc = ComplexDoc::from_complex(&GroupDoc::named("C2"), &b);
        assert_eq!(doc.build().unwrap(), b);
    }

    #[test]
    fn functor_doc_round_trip_validates() {
        let g = group_by_name("C4").unwrap();
        let pt = GSet::one_point(Arc::clone(&g));
        let y = yoneda(&pt, &Ring::Integers).unwrap();
        let doc = FunctorDoc::from_functor(&GroupDoc::named("C4"), &y);
        let rebuilt = doc.build().unwrap();
        assert_eq!(rebuilt.values, y.values);
        assert_eq!(rebuilt.action, y.action);
    }

    #[test]
    fn canonical_json_sorts_keys_and_is_stable() {
        #[derive(Serialize)]
        struct Scrambled {
            zeta: u32,
            alpha: u32,
            mid: Vec<u32>,
        }
        let s = Scrambled { zeta: 1, alpha: 2, mid: vec![3] };
        let text = canonical_json(&s).unwrap();
        assert_eq!(text, r#"{"alpha":2,"mid":[3],"zeta":1}"#);
        assert_eq!(text, canonical_json(&s).unwrap());
    }

    #[test]
    fn bad_documents_are_rejected() {
        assert!(from_json::<GroupDoc>("{\"name\": 3}").is_err());
        assert!(from_json::<GroupDoc>("not json").is_err());
        let both = GroupDoc { name: Some("C2".into()), cayley: Some(vec![vec![0]]) };
        assert!(both.build().is_err());
        let neither = GroupDoc { name: None, cayley: None };
        assert!(neither.build().is_err());
        // non-group table
        let bad = GroupDoc { name: None, cayley: Some(vec![vec![0, 1], vec![1, 1]]) };
        assert!(bad.build().is_err());
    }
}
