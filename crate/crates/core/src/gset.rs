//! Finite left G-sets with explicit action tables, equivariant maps,
//! orbit decomposition, products, pullbacks and restriction.

use crate::error::{Error, Result};
use crate::group::{left_cosets, left_cosets_in, Group, Subgroup};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct GSet {
    group: Arc<Group>,
    size: usize,
    /// action[g * size + x] = g . x
    action: Vec<usize>,
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.action == other.action
            && (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
    }
}

impl Eq for GSet {}

impl GSet {
    pub fn new(group: Arc<Group>, size: usize, rows: &[Vec<usize>]) -> Result<GSet> {
        let n = group.order();
        if rows.len() != n {
            return Err(Error::MalformedInput(format!(
                "action table has {} rows, group order is {n}",
                rows.len()
            )));
        }
        let mut action = Vec::with_capacity(n * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::MalformedInput("action row length mismatch".into()));
            }
            action.extend_from_slice(row);
        }
        GSet::from_flat(group, size, action)
    }

    /// As `new`, but from a single row-major action vector.
    pub fn from_flat(group: Arc<Group>, size: usize, action: Vec<usize>) -> Result<GSet> {
        let n = group.order();
        if action.len() != n * size {
            return Err(Error::MalformedInput(format!(
                "action table has {} entries, expected {}",
                action.len(),
                n * size
            )));
        }
        for &p in &action {
            if p >= size {
                return Err(Error::MalformedInput(format!("point {p} out of range")));
            }
        }
        let gs = GSet { group: Arc::clone(&group), size, action };
        for x in 0..size {
            if gs.act(0, x) != x {
                return Err(Error::MalformedInput(format!(
                    "identity moves point {x}"
                )));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                for x in 0..size {
                    if gs.act(g, gs.act(h, x)) != gs.act(gh, x) {
                        return Err(Error::MalformedInput(format!(
                            "action not compatible at (g={g}, h={h}, x={x})"
                        )));
                    }
                }
            }
        }
        Ok(gs)
    }

    pub(crate) fn new_unchecked(group: Arc<Group>, size: usize, action: Vec<usize>) -> GSet {
        GSet { group, size, action }
    }

    /// The coset space G/H with points ordered by canonical (minimal)
    /// coset representatives.
    pub fn transitive(group: Arc<Group>, h: &Subgroup) -> GSet {
        let cosets = left_cosets(h);
        let size = cosets.reps.len();
        let mut action = Vec::with_capacity(group.order() * size);
        for g in 0..group.order() {
            for &r in &cosets.reps {
                action.push(cosets.coset_of[group.mul(g, r)]);
            }
        }
        GSet::new_unchecked(Arc::clone(&group), size, action)
    }

    pub fn one_point(group: Arc<Group>) -> GSet {
        let h = Subgroup::full(Arc::clone(&group));
        GSet::transitive(group, &h)
    }

    pub fn empty(group: Arc<Group>) -> GSet {
        GSet::new_unchecked(group, 0, Vec::new())
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x]
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        (0..self.group.order())
            .map(|g| (0..self.size).map(|x| self.act(g, x)).collect())
            .collect()
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let elements: Vec<usize> = self
            .group
            .elements()
            .filter(|&g| self.act(g, x) == x)
            .collect();
        Subgroup::generated(Arc::clone(&self.group), &elements)
    }

    /// Orbits of a subgroup W acting on the points, ordered by minimal point.
    pub fn orbits_under(&self, w: &Subgroup) -> Vec<Orbit> {
        let mut seen = vec![false; self.size];
        let mut orbits = Vec::new();
        for p in 0..self.size {
            if seen[p] {
                continue;
            }
            let mut points = Vec::new();
            let mut transporter_of = HashMap::new();
            for &g in w.elements() {
                let q = self.act(g, p);
                if !seen[q] {
                    seen[q] = true;
                    points.push(q);
                }
                transporter_of.entry(q).or_insert(g);
            }
            points.sort_unstable();
            let stab_elements: Vec<usize> = w
                .elements()
                .iter()
                .copied()
                .filter(|&g| self.act(g, p) == p)
                .collect();
            let stabilizer =
                Subgroup::new(Arc::clone(&self.group), stab_elements).expect("stabilizer closed");
            let transporter: Vec<usize> = points.iter().map(|q| transporter_of[q]).collect();
            orbits.push(Orbit { rep: p, points, stabilizer, transporter });
        }
        orbits
    }

    pub fn orbits(&self) -> Vec<Orbit> {
        self.orbits_under(&Subgroup::full(Arc::clone(&self.group)))
    }

    /// Product with the diagonal action; point (x, y) has index x*|Y| + y.
    pub fn product(&self, other: &GSet) -> GSet {
        assert!(
            Arc::ptr_eq(&self.group, &other.group) || self.group == other.group,
            "product needs a common group"
        );
        let size = self.size * other.size;
        let n = self.group.order();
        let mut action = Vec::with_capacity(n * size);
        for g in 0..n {
            for x in 0..self.size {
                for y in 0..other.size {
                    action.push(self.act(g, x) * other.size + other.act(g, y));
                }
            }
        }
        GSet::new_unchecked(Arc::clone(&self.group), size, action)
    }

    /// Disjoint union, points of `self` first.
    pub fn disjoint_union(&self, other: &GSet) -> GSet {
        assert!(
            Arc::ptr_eq(&self.group, &other.group) || self.group == other.group,
            "disjoint union needs a common group"
        );
        let size = self.size + other.size;
        let n = self.group.order();
        let mut action = Vec::with_capacity(n * size);
        for g in 0..n {
            for x in 0..self.size {
                action.push(self.act(g, x));
            }
            for y in 0..other.size {
                action.push(other.act(g, y) + self.size);
            }
        }
        GSet::new_unchecked(Arc::clone(&self.group), size, action)
    }

    /// Restriction along a subgroup K: the same points as a K-set, with K
    /// re-rooted as an abstract group on its own Cayley table.
    pub fn restrict(&self, k: &Subgroup) -> Restriction {
        let (kgroup, elements) = k.as_group();
        let mut action = Vec::with_capacity(kgroup.order() * self.size);
        for &e in &elements {
            for x in 0..self.size {
                action.push(self.act(e, x));
            }
        }
        Restriction {
            gset: GSet::new_unchecked(Arc::clone(&kgroup), self.size, action),
            group_elements: elements,
        }
    }
}

/// An orbit of a subgroup W on a G-set. `transporter[i]` is the minimal
/// element of W sending `rep` to `points[i]`; the transporter sets are the
/// cosets of the stabilizer, so sorted transporters enumerate W/Stab in
/// canonical order.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub rep: usize,
    pub points: Vec<usize>,
    pub stabilizer: Subgroup,
    pub transporter: Vec<usize>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Chart between an orbit and the canonical coset space W/Stab(rep):
/// `point_of_coset[c]` is the point matching coset index c, and
/// `coset_of_point` inverts it (usize::MAX off the orbit).
#[derive(Clone, Debug)]
pub struct OrbitChart {
    pub orbit: Orbit,
    pub point_of_coset: Vec<usize>,
    pub coset_of_point: Vec<usize>,
}

pub fn orbit_chart(gset_size: usize, orbit: &Orbit) -> OrbitChart {
    let mut order: Vec<(usize, usize)> = orbit
        .transporter
        .iter()
        .copied()
        .zip(orbit.points.iter().copied())
        .collect();
    order.sort_unstable();
    let point_of_coset: Vec<usize> = order.iter().map(|&(_, p)| p).collect();
    let mut coset_of_point = vec![usize::MAX; gset_size];
    for (c, &(_, p)) in order.iter().enumerate() {
        coset_of_point[p] = c;
    }
    OrbitChart { orbit: orbit.clone(), point_of_coset, coset_of_point }
}

#[derive(Clone, Debug)]
pub struct Restriction {
    pub gset: GSet,
    /// new group index -> parent group element
    pub group_elements: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantMap {
    pub source: GSet,
    pub target: GSet,
    pub images: Vec<usize>,
}

impl EquivariantMap {
    pub fn new(source: GSet, target: GSet, images: Vec<usize>) -> Result<EquivariantMap> {
        if source.group != target.group {
            return Err(Error::MalformedInput("map between different groups".into()));
        }
        if images.len() != source.size() {
            return Err(Error::MalformedInput("image list length mismatch".into()));
        }
        for &y in &images {
            if y >= target.size() {
                return Err(Error::MalformedInput(format!("image {y} out of range")));
            }
        }
        for g in source.group.elements() {
            for x in 0..source.size() {
                if images[source.act(g, x)] != target.act(g, images[x]) {
                    return Err(Error::MalformedInput(format!(
                        "map not equivariant at (g={g}, x={x})"
                    )));
                }
            }
        }
        Ok(EquivariantMap { source, target, images })
    }

    pub fn identity(x: &GSet) -> EquivariantMap {
        EquivariantMap {
            source: x.clone(),
            target: x.clone(),
            images: (0..x.size()).collect(),
        }
    }

    pub fn compose(&self, then: &EquivariantMap) -> Result<EquivariantMap> {
        if self.target != then.source {
            return Err(Error::SourceTargetMismatch(
                "composition target/source differ".into(),
            ));
        }
        Ok(EquivariantMap {
            source: self.source.clone(),
            target: then.target.clone(),
            images: self.images.iter().map(|&y| then.images[y]).collect(),
        })
    }
}

/// All equivariant maps X -> Y, enumerated deterministically orbit by orbit.
pub fn equivariant_maps(x: &GSet, y: &GSet, bound: usize) -> Result<Vec<EquivariantMap>> {
    if x.size() > bound || y.size() > bound {
        return Err(Error::TooLarge {
            size: x.size().max(y.size()),
            bound,
        });
    }
    let orbits = x.orbits();
    // per orbit: the Y-points fixed by the orbit rep's stabilizer
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(orbits.len());
    let mut total: usize = 1;
    for orbit in &orbits {
        let fixed: Vec<usize> = (0..y.size())
            .filter(|&q| orbit.stabilizer.elements().iter().all(|&s| y.act(s, q) == q))
            .collect();
        total = total.saturating_mul(fixed.len());
        if total > bound {
            return Err(Error::TooLarge { size: total, bound });
        }
        candidates.push(fixed);
    }
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(Vec::new());
    }
    let mut maps = Vec::with_capacity(total);
    let mut choice = vec![0usize; orbits.len()];
    loop {
        let mut images = vec![usize::MAX; x.size()];
        for (oi, orbit) in orbits.iter().enumerate() {
            let q = candidates[oi][choice[oi]];
            for (k, &p) in orbit.points.iter().enumerate() {
                images[p] = y.act(orbit.transporter[k], q);
            }
        }
        maps.push(EquivariantMap {
            source: x.clone(),
            target: y.clone(),
            images,
        });
        // odometer increment
        let mut pos = orbits.len();
        loop {
            if pos == 0 {
                return Ok(maps);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Pullback X x_Z Y of maps f: X -> Z and g: Y -> Z, with its projections.
pub struct Pullback {
    pub gset: GSet,
    pub pairs: Vec<(usize, usize)>,
    pub to_source: EquivariantMap,
    pub to_target: EquivariantMap,
}

pub fn pullback(f: &EquivariantMap, g: &EquivariantMap) -> Result<Pullback> {
    if f.target != g.target {
        return Err(Error::SourceTargetMismatch(
            "pullback legs have different codomains".into(),
        ));
    }
    let x = &f.source;
    let y = &g.source;
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for a in 0..x.size() {
        for b in 0..y.size() {
            if f.images[a] == g.images[b] {
                index.insert((a, b), pairs.len());
                pairs.push((a, b));
            }
        }
    }
    let group = Arc::clone(x.group());
    let n = group.order();
    let mut action = Vec::with_capacity(n * pairs.len());
    for gg in 0..n {
        for &(a, b) in &pairs {
            action.push(index[&(x.act(gg, a), y.act(gg, b))]);
        }
    }
    let gset = GSet::new_unchecked(group, pairs.len(), action);
    let to_source = EquivariantMap {
        source: gset.clone(),
        target: x.clone(),
        images: pairs.iter().map(|&(a, _)| a).collect(),
    };
    let to_target = EquivariantMap {
        source: gset.clone(),
        target: y.clone(),
        images: pairs.iter().map(|&(_, b)| b).collect(),
    };
    Ok(Pullback { gset, pairs, to_source, to_target })
}

/// Canonical chart data for a W-orbit decomposition of a G-set, used when a
/// morphism matrix has to be read block by block against coset spaces.
pub struct WOrbitData {
    pub charts: Vec<OrbitChart>,
}

pub fn w_orbit_data(x: &GSet, w: &Subgroup) -> WOrbitData {
    let charts = x
        .orbits_under(w)
        .into_iter()
        .map(|o| orbit_chart(x.size(), &o))
        .collect();
    WOrbitData { charts }
}

impl WOrbitData {
    /// Cross-check: orbit transporters enumerate W/Stab canonically.
    pub fn verify_against_cosets(&self, w: &Subgroup) -> bool {
        self.charts.iter().all(|c| {
            let cs = left_cosets_in(w, &c.orbit.stabilizer);
            let mut t = c.orbit.transporter.clone();
            t.sort_unstable();
            cs.reps == t
        })
    }
}
