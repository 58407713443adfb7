//! Chain complexes of permutation modules: bounded complexes and the
//! 2-periodic shape, with fixed-point complexes, exact homology,
//! acyclicity relative to all subgroups, mapping cones, homotopy-class
//! computations against transitive generators, contractibility, and the
//! 2-periodic counterexample over C_p.
//!
//! Differentials lower degree: d_n maps X_n to X_{n-1}. A bounded complex
//! over degrees lo..=hi stores its modules bottom-up and diffs[i] is
//! d_{lo+i+1}. A 2-periodic complex stores two modules and two alternating
//! differentials, diffs[0]: X_0 -> X_1 acting in all even degrees.

use crate::error::{Error, Result};
use crate::group::{all_subgroups, Group, Subgroup};
use crate::gset::GSet;
use crate::linalg::{kernel_basis_field, solve_field, subquotient_invariants, ModuleInvariants};
use crate::matrix::Mat;
use crate::perm::{expand_in_basis, hom_basis, HomBasisElement, PermMorphism};
use crate::ring::{Ring, Scalar};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Bounded { lo: i64, hi: i64 },
    Periodic2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    pub ring: Ring,
    pub shape: Shape,
    pub modules: Vec<GSet>,
    pub diffs: Vec<PermMorphism>,
}

impl ChainComplex {
    /// A bounded complex over degrees lo..=hi; mats[i] is the matrix of
    /// d_{lo+i+1}: modules[i+1] -> modules[i]. Validates equivariance and
    /// d o d = 0.
    pub fn bounded(
        ring: Ring,
        lo: i64,
        hi: i64,
        modules: Vec<GSet>,
        mats: Vec<Mat>,
    ) -> Result<ChainComplex> {
        if hi < lo {
            return Err(Error::MalformedInput("empty degree range".into()));
        }
        let count = (hi - lo + 1) as usize;
        if modules.len() != count || mats.len() + 1 != count {
            return Err(Error::MalformedInput(format!(
                "expected {} modules and {} differentials",
                count,
                count - 1
            )));
        }
        let group = Arc::clone(modules[0].group());
        if modules.iter().any(|m| m.group().as_ref() != group.as_ref()) {
            return Err(Error::MalformedInput("modules over different groups".into()));
        }
        let mut diffs = Vec::with_capacity(mats.len());
        for (i, mat) in mats.into_iter().enumerate() {
            diffs.push(PermMorphism::new(
                ring.clone(),
                modules[i + 1].clone(),
                modules[i].clone(),
                mat,
            )?);
        }
        for i in 0..diffs.len().saturating_sub(1) {
            if !diffs[i + 1].then(&diffs[i])?.is_zero() {
                return Err(Error::MalformedInput(format!(
                    "d o d is nonzero between degrees {} and {}",
                    lo + i as i64 + 2,
                    lo + i as i64
                )));
            }
        }
        Ok(ChainComplex { ring, shape: Shape::Bounded { lo, hi }, modules, diffs })
    }

    /// The 2-periodic complex with X_n = X_{n mod 2}; d0: X_0 -> X_1
    /// serves all even degrees, d1: X_1 -> X_0 all odd ones. Both
    /// composites must vanish.
    pub fn periodic2(ring: Ring, x0: GSet, x1: GSet, d0: Mat, d1: Mat) -> Result<ChainComplex> {
        if x0.group().as_ref() != x1.group().as_ref() {
            return Err(Error::MalformedInput("modules over different groups".into()));
        }
        let d0 = PermMorphism::new(ring.clone(), x0.clone(), x1.clone(), d0)?;
        let d1 = PermMorphism::new(ring.clone(), x1.clone(), x0.clone(), d1)?;
        if !d0.then(&d1)?.is_zero() || !d1.then(&d0)?.is_zero() {
            return Err(Error::MalformedInput("alternating composites are nonzero".into()));
        }
        Ok(ChainComplex {
            ring,
            shape: Shape::Periodic2,
            modules: vec![x0, x1],
            diffs: vec![d0, d1],
        })
    }

    /// The zero complex on a degree range.
    pub fn zero(ring: Ring, group: Arc<Group>, lo: i64, hi: i64) -> ChainComplex {
        let modules: Vec<GSet> = (lo..=hi).map(|_| GSet::empty(Arc::clone(&group))).collect();
        let mats: Vec<Mat> = (lo..hi).map(|_| Mat::zeros(ring.clone(), 0, 0)).collect();
        ChainComplex::bounded(ring, lo, hi, modules, mats).expect("zero complex is valid")
    }

    /// The stalk complex with one module in a single degree.
    pub fn stalk(ring: Ring, degree: i64, x: GSet) -> ChainComplex {
        ChainComplex::bounded(ring, degree, degree, vec![x], Vec::new())
            .expect("stalk complex is valid")
    }

    pub fn group(&self) -> &Arc<Group> {
        self.modules[0].group()
    }

    pub fn degrees(&self) -> Vec<i64> {
        match self.shape {
            Shape::Bounded { lo, hi } => (lo..=hi).collect(),
            Shape::Periodic2 => vec![0, 1],
        }
    }

    pub fn module(&self, n: i64) -> Option<&GSet> {
        match self.shape {
            Shape::Bounded { lo, hi } => {
                if n < lo || n > hi {
                    None
                } else {
                    Some(&self.modules[(n - lo) as usize])
                }
            }
            Shape::Periodic2 => Some(&self.modules[n.rem_euclid(2) as usize]),
        }
    }

    /// The differential leaving degree n, when present.
    pub fn diff(&self, n: i64) -> Option<&PermMorphism> {
        match self.shape {
            Shape::Bounded { lo, hi } => {
                if n <= lo || n > hi {
                    None
                } else {
                    Some(&self.diffs[(n - lo - 1) as usize])
                }
            }
            Shape::Periodic2 => Some(&self.diffs[n.rem_euclid(2) as usize]),
        }
    }
}

/// Degreewise disjoint union of modules with block-diagonal differentials.
pub fn direct_sum(x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
    if x.shape != y.shape {
        return Err(Error::SourceTargetMismatch(
            "direct sum of complexes with different shapes".into(),
        ));
    }
    if x.ring != y.ring {
        return Err(Error::RingMismatch(x.ring.name(), y.ring.name()));
    }
    let modules: Vec<GSet> = x
        .modules
        .iter()
        .zip(&y.modules)
        .map(|(a, b)| a.disjoint_union(b))
        .collect();
    let mats: Vec<Mat> = x
        .diffs
        .iter()
        .zip(&y.diffs)
        .map(|(a, b)| a.mat.direct_sum(&b.mat))
        .collect();
    match x.shape {
        Shape::Bounded { lo, hi } => ChainComplex::bounded(x.ring.clone(), lo, hi, modules, mats),
        Shape::Periodic2 => {
            let mut it = mats.into_iter();
            let (d0, d1) = (it.next().unwrap(), it.next().unwrap());
            ChainComplex::periodic2(
                x.ring.clone(),
                modules[0].clone(),
                modules[1].clone(),
                d0,
                d1,
            )
        }
    }
}

/// A degreewise equivariant map of complexes of the same shape, commuting
/// with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub components: Vec<PermMorphism>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, mats: Vec<Mat>) -> Result<ChainMap> {
        if source.shape != target.shape {
            return Err(Error::SourceTargetMismatch(
                "chain map between different shapes".into(),
            ));
        }
        if source.ring != target.ring {
            return Err(Error::RingMismatch(source.ring.name(), target.ring.name()));
        }
        if mats.len() != source.modules.len() {
            return Err(Error::MalformedInput(format!(
                "expected {} components",
                source.modules.len()
            )));
        }
        let mut components = Vec::with_capacity(mats.len());
        for (i, mat) in mats.into_iter().enumerate() {
            components.push(PermMorphism::new(
                source.ring.clone(),
                source.modules[i].clone(),
                target.modules[i].clone(),
                mat,
            )?);
        }
        match source.shape {
            Shape::Bounded { .. } => {
                for i in 0..source.diffs.len() {
                    let lhs = source.diffs[i].then(&components[i])?;
                    let rhs = components[i + 1].then(&target.diffs[i])?;
                    if lhs.mat != rhs.mat {
                        return Err(Error::SourceTargetMismatch(format!(
                            "map does not commute with d at differential {i}"
                        )));
                    }
                }
            }
            Shape::Periodic2 => {
                for i in 0..2 {
                    let lhs = source.diffs[i].then(&components[(i + 1) % 2])?;
                    let rhs = components[i].then(&target.diffs[i])?;
                    if lhs.mat != rhs.mat {
                        return Err(Error::SourceTargetMismatch(format!(
                            "map does not commute with d at differential {i}"
                        )));
                    }
                }
            }
        }
        Ok(ChainMap { source, target, components })
    }

    pub fn identity(x: &ChainComplex) -> ChainMap {
        let mats = x.modules.iter().map(|m| Mat::identity(x.ring.clone(), m.size())).collect();
        ChainMap::new(x.clone(), x.clone(), mats).expect("identity commutes")
    }

    /// The zero map to the zero complex on the same degree range.
    pub fn to_zero(x: &ChainComplex) -> Result<ChainMap> {
        let (lo, hi) = match x.shape {
            Shape::Bounded { lo, hi } => (lo, hi),
            Shape::Periodic2 => {
                return Err(Error::ShapeUnsupported {
                    required: "bounded complex".into(),
                    found: "2-periodic".into(),
                })
            }
        };
        let z = ChainComplex::zero(x.ring.clone(), Arc::clone(x.group()), lo, hi);
        let mats = x.modules.iter().map(|m| Mat::zeros(x.ring.clone(), 0, m.size())).collect();
        ChainMap::new(x.clone(), z, mats)
    }
}

/// The mapping cone of a bounded chain map, with the sign convention
/// d(x, y) = (-dx, f(x) + dy). Cone_n = X_{n-1} (+) Y_n over lo..=hi+1.
pub fn cone(f: &ChainMap) -> Result<ChainComplex> {
    let (lo, hi) = match f.source.shape {
        Shape::Bounded { lo, hi } => (lo, hi),
        Shape::Periodic2 => {
            return Err(Error::ShapeUnsupported {
                required: "bounded complex".into(),
                found: "2-periodic".into(),
            })
        }
    };
    let ring = f.source.ring.clone();
    let group = Arc::clone(f.source.group());
    let empty = GSet::empty(Arc::clone(&group));
    let x_at = |n: i64| f.source.module(n).cloned().unwrap_or_else(|| empty.clone());
    let y_at = |n: i64| f.target.module(n).cloned().unwrap_or_else(|| empty.clone());
    let modules: Vec<GSet> = (lo..=hi + 1).map(|n| x_at(n - 1).disjoint_union(&y_at(n))).collect();
    let zero_between = |a: &GSet, b: &GSet| Mat::zeros(ring.clone(), b.size(), a.size());
    let mut mats = Vec::new();
    for n in lo + 1..=hi + 1 {
        // from X_{n-1} (+) Y_n to X_{n-2} (+) Y_{n-1}
        let (xs, ys) = (x_at(n - 1), y_at(n));
        let (xt, yt) = (x_at(n - 2), y_at(n - 1));
        let dx = match f.source.diff(n - 1) {
            Some(d) => d.mat.neg(),
            None => zero_between(&xs, &xt),
        };
        let fx = if xs.size() > 0 && yt.size() > 0 {
            f.components[(n - 1 - lo) as usize].mat.clone()
        } else {
            zero_between(&xs, &yt)
        };
        let dy = match f.target.diff(n) {
            Some(d) => d.mat.clone(),
            None => zero_between(&ys, &yt),
        };
        let top = dx.hstack(&zero_between(&ys, &xt));
        let bottom = fx.hstack(&dy);
        mats.push(top.vstack(&bottom));
    }
    ChainComplex::bounded(ring, lo, hi + 1, modules, mats)
}

/// A complex of plain modules over the ring: dimensions and differential
/// matrices in the shape conventions of `ChainComplex`.
#[derive(Clone, Debug)]
pub struct PlainComplex {
    pub ring: Ring,
    pub shape: Shape,
    pub dims: Vec<usize>,
    pub mats: Vec<Mat>,
}

impl PlainComplex {
    fn diff_mat(&self, n: i64) -> Option<&Mat> {
        match self.shape {
            Shape::Bounded { lo, hi } => {
                if n <= lo || n > hi {
                    None
                } else {
                    Some(&self.mats[(n - lo - 1) as usize])
                }
            }
            Shape::Periodic2 => Some(&self.mats[n.rem_euclid(2) as usize]),
        }
    }

    fn dim(&self, n: i64) -> usize {
        match self.shape {
            Shape::Bounded { lo, hi } => {
                if n < lo || n > hi {
                    0
                } else {
                    self.dims[(n - lo) as usize]
                }
            }
            Shape::Periodic2 => self.dims[n.rem_euclid(2) as usize],
        }
    }

    /// Exact homology at degree n: kernel of the outgoing differential
    /// modulo the image of the incoming one.
    pub fn homology(&self, n: i64) -> ModuleInvariants {
        if let Shape::Bounded { lo, hi } = self.shape {
            if n < lo || n > hi {
                return ModuleInvariants::zero();
            }
        }
        let d = self.dim(n);
        let t = match self.diff_mat(n) {
            Some(m) => m.clone(),
            None => Mat::zeros(self.ring.clone(), 0, d),
        };
        let s = match self.diff_mat(n + 1) {
            Some(m) => m.clone(),
            None => Mat::zeros(self.ring.clone(), d, 0),
        };
        subquotient_invariants(&t, &s)
    }

    pub fn degrees(&self) -> Vec<i64> {
        match self.shape {
            Shape::Bounded { lo, hi } => (lo..=hi).collect(),
            Shape::Periodic2 => vec![0, 1],
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().into_iter().all(|n| self.homology(n).is_trivial())
    }
}

/// Orbit-sum data for the H-fixed points of a permutation module: the
/// orbits, one representative point per orbit.
fn orbit_reps(x: &GSet, h: &Subgroup) -> Vec<(usize, Vec<usize>)> {
    x.orbits_under(h).into_iter().map(|o| (o.rep, o.points)).collect()
}

/// The matrix of an equivariant map restricted to H-fixed points, in
/// orbit-sum bases: a fixed vector is constant on orbits, so the
/// coefficient at a target orbit is the value at its representative.
fn fixed_matrix(
    ring: &Ring,
    m: &Mat,
    src_orbits: &[(usize, Vec<usize>)],
    tgt_orbits: &[(usize, Vec<usize>)],
) -> Mat {
    Mat::from_fn(ring.clone(), tgt_orbits.len(), src_orbits.len(), |i, j| {
        let rep = tgt_orbits[i].0;
        let mut acc = ring.zero();
        for &q in &src_orbits[j].1 {
            acc = ring.add(&acc, m.get(rep, q));
        }
        acc
    })
}

/// Degreewise H-fixed points: modules become free on the H-orbits (orbit
/// sums), differentials restrict exactly.
pub fn fixed_point_complex(x: &ChainComplex, h: &Subgroup) -> PlainComplex {
    let orbit_data: Vec<Vec<(usize, Vec<usize>)>> =
        x.modules.iter().map(|m| orbit_reps(m, h)).collect();
    let dims: Vec<usize> = orbit_data.iter().map(|o| o.len()).collect();
    let mats: Vec<Mat> = match x.shape {
        Shape::Bounded { .. } => (0..x.diffs.len())
            .map(|i| fixed_matrix(&x.ring, &x.diffs[i].mat, &orbit_data[i + 1], &orbit_data[i]))
            .collect(),
        Shape::Periodic2 => vec![
            fixed_matrix(&x.ring, &x.diffs[0].mat, &orbit_data[0], &orbit_data[1]),
            fixed_matrix(&x.ring, &x.diffs[1].mat, &orbit_data[1], &orbit_data[0]),
        ],
    };
    PlainComplex { ring: x.ring.clone(), shape: x.shape, dims, mats }
}

/// Outcome of the acyclicity scan: per-class-representative witnesses
/// (subgroup elements, degree) where fixed-point homology is nonzero.
#[derive(Clone, Debug)]
pub struct GammaReport {
    pub acyclic: bool,
    pub witnesses: Vec<(Vec<usize>, i64)>,
}

/// True iff the H-fixed complex is exact in every degree for every
/// subgroup H, checked on conjugacy class representatives. Conjugate
/// subgroups are asserted to give the same invariants degreewise.
pub fn is_gamma_acyclic(x: &ChainComplex) -> Result<GammaReport> {
    let group = x.group();
    let lat = all_subgroups(group, crate::group::configured_max_group())?;
    let degrees = x.degrees();
    let mut class_invariants: Vec<Vec<ModuleInvariants>> = Vec::new();
    let mut witnesses = Vec::new();
    for &rep_idx in &lat.class_reps {
        let rep = &lat.subgroups[rep_idx];
        let fixed = fixed_point_complex(x, rep);
        let invs: Vec<ModuleInvariants> = degrees.iter().map(|&n| fixed.homology(n)).collect();
        for (&n, inv) in degrees.iter().zip(invs.iter()) {
            if !inv.is_trivial() {
                witnesses.push((rep.elements().to_vec(), n));
            }
        }
        class_invariants.push(invs);
    }
    // fixed points commute with conjugation: every class member must give
    // the same homology as its representative
    for (i, sub) in lat.subgroups.iter().enumerate() {
        if lat.class_reps[lat.class_of[i]] == i {
            continue;
        }
        let fixed = fixed_point_complex(x, sub);
        for (pos, &n) in degrees.iter().enumerate() {
            assert_eq!(
                fixed.homology(n),
                class_invariants[lat.class_of[i]][pos],
                "conjugation invariance of fixed-point homology"
            );
        }
    }
    Ok(GammaReport { acyclic: witnesses.is_empty(), witnesses })
}

/// The plain mapping cone of matrices between plain complexes (same
/// bounded shape), with the equivariant cone's sign convention.
fn plain_cone(fx: &PlainComplex, fy: &PlainComplex, comps: &[Mat]) -> PlainComplex {
    let (lo, hi) = match fx.shape {
        Shape::Bounded { lo, hi } => (lo, hi),
        Shape::Periodic2 => unreachable!("cone of periodic complexes is unsupported"),
    };
    let ring = fx.ring.clone();
    let dims: Vec<usize> = (lo..=hi + 1).map(|n| fx.dim(n - 1) + fy.dim(n)).collect();
    let mut mats = Vec::new();
    for n in lo + 1..=hi + 1 {
        let dx = match fx.diff_mat(n - 1) {
            Some(m) => m.neg(),
            None => Mat::zeros(ring.clone(), fx.dim(n - 2), fx.dim(n - 1)),
        };
        let f = if n - 1 >= lo && n - 1 <= hi {
            comps[(n - 1 - lo) as usize].clone()
        } else {
            Mat::zeros(ring.clone(), fy.dim(n - 1), fx.dim(n - 1))
        };
        let dy = match fy.diff_mat(n) {
            Some(m) => m.clone(),
            None => Mat::zeros(ring.clone(), fy.dim(n - 1), fy.dim(n)),
        };
        let top = dx.hstack(&Mat::zeros(ring.clone(), fx.dim(n - 2), fy.dim(n)));
        let bottom = f.hstack(&dy);
        mats.push(top.vstack(&bottom));
    }
    PlainComplex { ring, shape: Shape::Bounded { lo, hi: hi + 1 }, dims, mats }
}

/// A bounded chain map is a quasi-isomorphism after every fixed-point
/// functor iff its cone is acyclic relative to every subgroup. Both
/// routes are computed — the equivariant cone, and the plain cones of the
/// fixed maps per class representative — and asserted to agree.
pub fn is_gamma_qis(f: &ChainMap) -> Result<bool> {
    let via_cone = is_gamma_acyclic(&cone(f)?)?.acyclic;
    let group = f.source.group();
    let lat = all_subgroups(group, crate::group::configured_max_group())?;
    let mut via_fixed = true;
    for rep in lat.rep_subgroups() {
        let fx = fixed_point_complex(&f.source, rep);
        let fy = fixed_point_complex(&f.target, rep);
        let src_orbits: Vec<_> = f.source.modules.iter().map(|m| orbit_reps(m, rep)).collect();
        let tgt_orbits: Vec<_> = f.target.modules.iter().map(|m| orbit_reps(m, rep)).collect();
        let comps: Vec<Mat> = (0..f.components.len())
            .map(|i| fixed_matrix(&f.source.ring, &f.components[i].mat, &src_orbits[i], &tgt_orbits[i]))
            .collect();
        if !plain_cone(&fx, &fy, &comps).is_acyclic() {
            via_fixed = false;
        }
    }
    assert_eq!(via_cone, via_fixed, "cone acyclicity vs fixed-point quasi-isomorphism");
    Ok(via_cone)
}

fn basis_at(x: &ChainComplex, gen: &GSet, n: i64) -> Vec<HomBasisElement> {
    match x.module(n) {
        Some(m) => hom_basis(gen, m, &x.ring),
        None => Vec::new(),
    }
}

fn post_composition_matrix(
    x: &ChainComplex,
    from: &[HomBasisElement],
    to: &[HomBasisElement],
    n: i64,
) -> Result<Mat> {
    // matrix of (phi -> d_n o phi): Hom(P, X_n) -> Hom(P, X_{n-1})
    let ring = x.ring.clone();
    match x.diff(n) {
        None => Ok(Mat::zeros(ring, to.len(), from.len())),
        Some(d) => {
            let mut cols = Vec::with_capacity(from.len());
            for el in from {
                cols.push(expand_in_basis(&el.morphism.then(d)?, to)?);
            }
            Ok(Mat::from_columns(ring, to.len(), &cols))
        }
    }
}

/// Chain maps R(G/H)[n] -> X modulo chain homotopy, computed in hom-basis
/// coordinates: the kernel of post-composition with d_n modulo the image
/// of post-composition with d_{n+1}. Asserted to equal H_n(X^H).
pub fn homotopy_classes_from_generator(
    h: &Subgroup,
    n: i64,
    x: &ChainComplex,
) -> Result<ModuleInvariants> {
    if x.shape == Shape::Periodic2 {
        return Err(Error::ShapeUnsupported {
            required: "bounded complex".into(),
            found: "2-periodic".into(),
        });
    }
    let gen = GSet::transitive(Arc::clone(x.group()), h);
    let b_below = basis_at(x, &gen, n - 1);
    let b_here = basis_at(x, &gen, n);
    let b_above = basis_at(x, &gen, n + 1);
    let t = post_composition_matrix(x, &b_here, &b_below, n)?;
    let s = post_composition_matrix(x, &b_above, &b_here, n + 1)?;
    let inv = subquotient_invariants(&t, &s);
    let homology = fixed_point_complex(x, h).homology(n);
    assert_eq!(
        inv, homology,
        "homotopy classes from the generator must compute fixed-point homology"
    );
    Ok(inv)
}

fn permutation_action(ring: &Ring, x: &GSet, g: usize) -> Mat {
    let perm: Vec<usize> = (0..x.size()).map(|p| x.act(g, p)).collect();
    Mat::permutation(ring.clone(), &perm)
}

/// Does the kernel of d split off equivariantly from its source module?
/// Tested by solving for a retraction s with s o incl = id that commutes
/// with the group action.
fn kernel_splits(d: &PermMorphism) -> bool {
    let ring = d.ring.clone();
    let x = &d.source;
    let b = kernel_basis_field(&d.mat);
    let k = b.cols;
    if k == 0 {
        return true;
    }
    let m = x.size();
    let gens = x.group().small_generating_set();
    // rho_K(g): the action of g on the kernel in the basis b
    let mut kernel_actions = Vec::new();
    for &g in &gens {
        let moved = permutation_action(&ring, x, g).mul(&b);
        let rho = solve_field(&b, &moved).expect("kernel is an invariant subspace");
        kernel_actions.push((g, rho));
    }
    // unknown s: k x m with s b = id_k and s rho_X(g) = rho_K(g) s
    let unknowns = k * m;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for a in 0..k {
        for c in 0..k {
            let mut row = vec![ring.zero(); unknowns];
            for i in 0..m {
                row[a * m + i] = b.get(i, c).clone();
            }
            rows.push(row);
            rhs.push(if a == c { ring.one() } else { ring.zero() });
        }
    }
    for (g, rho) in &kernel_actions {
        let px = permutation_action(&ring, x, *g);
        for a in 0..k {
            for c in 0..m {
                let mut row = vec![ring.zero(); unknowns];
                for i in 0..m {
                    let v = px.get(i, c).clone();
                    if !ring.is_zero(&v) {
                        row[a * m + i] = ring.add(&row[a * m + i], &v);
                    }
                }
                for i in 0..k {
                    let v = ring.neg(rho.get(a, i));
                    if !ring.is_zero(&v) {
                        row[i * m + c] = ring.add(&row[i * m + c], &v);
                    }
                }
                rows.push(row);
                rhs.push(ring.zero());
            }
        }
    }
    let mut amat = Mat::zeros(ring.clone(), rows.len(), unknowns);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !ring.is_zero(v) {
                amat.set(i, j, v.clone());
            }
        }
    }
    let bmat = Mat::from_columns(ring, rhs.len(), &[rhs]);
    solve_field(&amat, &bmat).is_some()
}

/// Contractibility over a field. Bounded complexes: solvability of the
/// equivariant homotopy system d h + h d = id in hom-basis coordinates.
/// 2-periodic complexes: exactness plus equivariant splitting of the
/// kernel of each alternating differential (a 2-periodic contraction
/// exists precisely under these conditions).
pub fn is_contractible(x: &ChainComplex) -> Result<bool> {
    if !x.ring.is_field() {
        return Err(Error::FieldRequired(x.ring.name()));
    }
    match x.shape {
        Shape::Periodic2 => {
            let plain = fixed_point_complex(x, &Subgroup::trivial(Arc::clone(x.group())));
            if !(plain.homology(0).is_trivial() && plain.homology(1).is_trivial()) {
                return Ok(false);
            }
            Ok(kernel_splits(&x.diffs[0]) && kernel_splits(&x.diffs[1]))
        }
        Shape::Bounded { lo, hi } => {
            let ring = x.ring.clone();
            // unknowns: h_n: X_n -> X_{n+1} for n in lo..hi, in hom bases
            let h_bases: Vec<Vec<HomBasisElement>> = (lo..hi)
                .map(|n| hom_basis(x.module(n).unwrap(), x.module(n + 1).unwrap(), &ring))
                .collect();
            let mut offsets = vec![0usize];
            for b in &h_bases {
                offsets.push(offsets.last().unwrap() + b.len());
            }
            let unknowns = *offsets.last().unwrap();
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            let mut rhs: Vec<Scalar> = Vec::new();
            for n in lo..=hi {
                let xn = x.module(n).unwrap();
                if xn.size() == 0 {
                    continue;
                }
                let end_basis = hom_basis(xn, xn, &ring);
                let id_coords =
                    expand_in_basis(&PermMorphism::identity(ring.clone(), xn), &end_basis)?;
                let mut eq_rows = vec![vec![ring.zero(); unknowns]; end_basis.len()];
                if n < hi {
                    // d_{n+1} o h_n
                    let hb = &h_bases[(n - lo) as usize];
                    let d = x.diff(n + 1).unwrap();
                    for (j, phi) in hb.iter().enumerate() {
                        let coords = expand_in_basis(&phi.morphism.then(d)?, &end_basis)?;
                        for (i, c) in coords.iter().enumerate() {
                            let idx = offsets[(n - lo) as usize] + j;
                            eq_rows[i][idx] = ring.add(&eq_rows[i][idx], c);
                        }
                    }
                }
                if n > lo {
                    // h_{n-1} o d_n
                    let hb = &h_bases[(n - 1 - lo) as usize];
                    let d = x.diff(n).unwrap();
                    for (j, psi) in hb.iter().enumerate() {
                        let coords = expand_in_basis(&d.then(&psi.morphism)?, &end_basis)?;
                        for (i, c) in coords.iter().enumerate() {
                            let idx = offsets[(n - 1 - lo) as usize] + j;
                            eq_rows[i][idx] = ring.add(&eq_rows[i][idx], c);
                        }
                    }
                }
                rows.extend(eq_rows);
                rhs.extend(id_coords);
            }
            if rows.is_empty() {
                return Ok(true);
            }
            let mut amat = Mat::zeros(ring.clone(), rows.len(), unknowns);
            for (i, row) in rows.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if !ring.is_zero(v) {
                        amat.set(i, j, v.clone());
                    }
                }
            }
            let bmat = Mat::from_columns(ring, rhs.len(), &[rhs]);
            Ok(solve_field(&amat, &bmat).is_some())
        }
    }
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The 2-periodic complex over F_p on kC_p (+) k that is acyclic relative
/// to every subgroup yet not contractible: the alternating differentials
/// are (sigma - 1, eta; eps, 0) and (alpha, eta; eps, 0), where eta is the
/// norm unit, eps the augmentation, and alpha multiplication by
/// sum_i i sigma^i.
pub fn cp_example(p: u64, ring: &Ring) -> Result<ChainComplex> {
    if !is_odd_prime(p) {
        return Err(Error::BadPrime(p));
    }
    if *ring != Ring::PrimeField(p) {
        return Err(Error::RingMismatch(ring.name(), format!("Fp:{p}")));
    }
    let group = Group::cyclic(p as usize);
    let free = GSet::transitive(Arc::clone(&group), &Subgroup::trivial(Arc::clone(&group)));
    let point = GSet::one_point(Arc::clone(&group));
    let m = free.disjoint_union(&point);
    let n = p as usize;
    let mut a = Mat::zeros(ring.clone(), n + 1, n + 1);
    let mut b = Mat::zeros(ring.clone(), n + 1, n + 1);
    let one = ring.one();
    for j in 0..n {
        // sigma - 1 on the free part
        a.add_assign_at(m.act(1, j), j, &one);
        a.add_assign_at(j, j, &ring.neg(&one));
        // counit row and norm-unit column
        a.set(n, j, one.clone());
        a.set(j, n, one.clone());
        b.set(n, j, one.clone());
        b.set(j, n, one.clone());
        // alpha: sigma^j -> sum_i i sigma^{i+j}
        let mut point_i = j;
        for i in 0..n {
            b.add_assign_at(point_i, j, &ring.from_i64(i as i64));
            point_i = m.act(1, point_i);
        }
    }
    ChainComplex::periodic2(ring.clone(), m.clone(), m, a, b)
}

/// X lies in the right orthogonal of all shifted transitive generators
/// iff it is acyclic relative to every subgroup; both sides are computed
/// and asserted equal.
pub fn compact_generation_probe(x: &ChainComplex) -> Result<bool> {
    let (lo, hi) = match x.shape {
        Shape::Bounded { lo, hi } => (lo, hi),
        Shape::Periodic2 => {
            return Err(Error::ShapeUnsupported {
                required: "bounded complex".into(),
                found: "2-periodic".into(),
            })
        }
    };
    let lat = all_subgroups(x.group(), crate::group::configured_max_group())?;
    let mut orthogonal = true;
    for rep in lat.rep_subgroups() {
        for n in lo..=hi {
            if !homotopy_classes_from_generator(rep, n, x)?.is_trivial() {
                orthogonal = false;
            }
        }
    }
    let acyclic = is_gamma_acyclic(x)?.acyclic;
    assert_eq!(
        orthogonal, acyclic,
        "orthogonality to generators vs fixed-point acyclicity"
    );
    Ok(orthogonal)
}
