//! Linearization: from finite G-sets and spans to permutation modules and
//! equivariant matrices over an exact coefficient ring.
//!
//! The free module R[X] on a G-set X carries the permutation action. Its
//! equivariant homs R[X] -> R[Y] are free with one basis element per orbit
//! of X x Y; for transitive X = G/K, Y = G/H these are indexed by double
//! cosets K\G/H, with f_g sending [c] to the sum of [c x g] over coset
//! representatives x of K/(K n gHg^{-1}). Spans linearize by counting
//! fibres of the left leg. The two routes are kept independent so they can
//! be checked against each other.

use crate::error::{Error, Result};
use crate::group::{
    all_subgroups, double_cosets, left_cosets, left_cosets_in, quotient_group, subgroup_lattice,
    Group, Subgroup,
};
use crate::gset::{orbit_chart, EquivariantMap, GSet, OrbitChart};
use crate::linalg::{int_kernel_basis, rank_field, solve_int, snf, ZMat};
use crate::matrix::Mat;
use crate::ring::{Ring, Scalar};
use crate::span::{compose as span_compose, ideal_generator, omega_hom_basis,
    realize, BasisKey, Span, SpanSum};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// An equivariant matrix between permutation modules. Columns are indexed
/// by the source points, rows by the target points.
#[derive(Clone, Debug, PartialEq)]
pub struct PermMorphism {
    pub ring: Ring,
    pub source: GSet,
    pub target: GSet,
    pub mat: Mat,
}

impl PermMorphism {
    pub fn new(ring: Ring, source: GSet, target: GSet, mat: Mat) -> Result<PermMorphism> {
        if mat.rows != target.size() || mat.cols != source.size() {
            return Err(Error::SourceTargetMismatch(format!(
                "matrix is {}x{}, modules have ranks {} and {}",
                mat.rows,
                mat.cols,
                target.size(),
                source.size()
            )));
        }
        if mat.ring != ring {
            return Err(Error::RingMismatch(mat.ring.name(), ring.name()));
        }
        let group = source.group();
        for g in group.small_generating_set() {
            for j in 0..mat.cols {
                for i in 0..mat.rows {
                    if mat.get(i, j) != mat.get(target.act(g, i), source.act(g, j)) {
                        return Err(Error::SourceTargetMismatch(format!(
                            "matrix is not equivariant at generator {g}, entry ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(PermMorphism { ring, source, target, mat })
    }

    pub fn zero(ring: Ring, source: GSet, target: GSet) -> PermMorphism {
        let mat = Mat::zeros(ring.clone(), target.size(), source.size());
        PermMorphism { ring, source, target, mat }
    }

    pub fn identity(ring: Ring, x: &GSet) -> PermMorphism {
        let mat = Mat::identity(ring.clone(), x.size());
        PermMorphism { ring, source: x.clone(), target: x.clone(), mat }
    }

    /// Composition in diagrammatic order: self then next.
    pub fn then(&self, next: &PermMorphism) -> Result<PermMorphism> {
        if self.target != next.source {
            return Err(Error::SourceTargetMismatch(
                "composition middles differ".into(),
            ));
        }
        Ok(PermMorphism {
            ring: self.ring.clone(),
            source: self.source.clone(),
            target: next.target.clone(),
            mat: next.mat.mul(&self.mat),
        })
    }

    pub fn add(&self, other: &PermMorphism) -> PermMorphism {
        PermMorphism {
            ring: self.ring.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            mat: self.mat.add(&other.mat),
        }
    }

    pub fn scale(&self, s: &Scalar) -> PermMorphism {
        PermMorphism {
            ring: self.ring.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            mat: self.mat.scale(s),
        }
    }

    /// Transpose along the self-duality of permutation modules.
    pub fn dual(&self) -> PermMorphism {
        PermMorphism {
            ring: self.ring.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
            mat: self.mat.transpose(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }
}

/// Linearize an equivariant map of G-sets.
pub fn linearize_map(f: &EquivariantMap, ring: Ring) -> PermMorphism {
    let mut mat = Mat::zeros(ring.clone(), f.target.size(), f.source.size());
    let one = ring.one();
    for (x, &y) in f.images.iter().enumerate() {
        mat.add_assign_at(y, x, &one);
    }
    PermMorphism { ring, source: f.source.clone(), target: f.target.clone(), mat }
}

fn span_matrix(span: &Span, ring: &Ring) -> Mat {
    let mut mat = Mat::zeros(ring.clone(), span.target.size(), span.source.size());
    let one = ring.one();
    for z in 0..span.mid.size() {
        mat.add_assign_at(span.right[z], span.left[z], &one);
    }
    mat
}

/// Linearize a canonical span sum: each term contributes the fibre-count
/// matrix of its realized span.
pub fn linearize(s: &SpanSum) -> PermMorphism {
    let mut mat = Mat::zeros(s.ring.clone(), s.target.size(), s.source.size());
    for (key, coeff) in &s.terms {
        let r = realize(&s.source, &s.target, key);
        mat = mat.add(&span_matrix(&r, &s.ring).scale(coeff));
    }
    PermMorphism {
        ring: s.ring.clone(),
        source: s.source.clone(),
        target: s.target.clone(),
        mat,
    }
}

/// One hom-basis element: the double-coset morphism g between a source
/// orbit and a target orbit.
#[derive(Clone, Debug)]
pub struct HomBasisElement {
    pub src_orbit: usize,
    pub tgt_orbit: usize,
    pub g: usize,
    pub morphism: PermMorphism,
}

fn charts_of(x: &GSet) -> Vec<OrbitChart> {
    x.orbits().into_iter().map(|o| orbit_chart(x.size(), &o)).collect()
}

/// The free basis of the equivariant homs R[X] -> R[Y], built directly
/// from double cosets of the orbit stabilizers (no span machinery).
/// Ordered by (source orbit, target orbit, g ascending).
pub fn hom_basis(x: &GSet, y: &GSet, ring: &Ring) -> Vec<HomBasisElement> {
    let group = Arc::clone(x.group());
    let xcharts = charts_of(x);
    let ycharts = charts_of(y);
    let mut out = Vec::new();
    for (i, cx) in xcharts.iter().enumerate() {
        let k = &cx.orbit.stabilizer;
        let k_cosets = left_cosets(k);
        for (j, cy) in ycharts.iter().enumerate() {
            let h = &cy.orbit.stabilizer;
            let h_cosets = left_cosets(h);
            let dc = double_cosets(k, h);
            for &g in &dc.reps {
                let m = {
                    let elems: Vec<usize> = k
                        .elements()
                        .iter()
                        .copied()
                        .filter(|&e| h.contains(group.conj(group.inv(g), e)))
                        .collect();
                    Subgroup::new(Arc::clone(&group), elems).expect("K n gHg^{-1}")
                };
                let m_cosets = left_cosets_in(k, &m);
                let mut mat = Mat::zeros(ring.clone(), y.size(), x.size());
                let one = ring.one();
                for (c, &a) in k_cosets.reps.iter().enumerate() {
                    let col = cx.point_of_coset[c];
                    for &t in &m_cosets.reps {
                        let target_coset = h_cosets.coset_of[group.mul(group.mul(a, t), g)];
                        mat.add_assign_at(cy.point_of_coset[target_coset], col, &one);
                    }
                }
                let morphism = PermMorphism::new(ring.clone(), x.clone(), y.clone(), mat)
                    .expect("double-coset morphism is equivariant");
                out.push(HomBasisElement { src_orbit: i, tgt_orbit: j, g, morphism });
            }
        }
    }
    out
}

/// Rank of the equivariant hom module: one basis element per orbit of the
/// product, i.e. the sum of double-coset counts over orbit pairs.
pub fn hom_rank(x: &GSet, y: &GSet) -> usize {
    x.product(y).orbits().len()
}

/// Coefficients of an equivariant matrix in the hom basis, in the order of
/// `hom_basis`. Verified by exact reconstruction.
pub fn expand_morphism(m: &PermMorphism) -> Result<Vec<Scalar>> {
    let basis = hom_basis(&m.source, &m.target, &m.ring);
    expand_in_basis(m, &basis)
}

/// As `expand_morphism`, against an already-computed basis.
pub fn expand_in_basis(m: &PermMorphism, basis: &[HomBasisElement]) -> Result<Vec<Scalar>> {
    let xcharts = charts_of(&m.source);
    let ycharts = charts_of(&m.target);
    let h_cosets: Vec<_> = ycharts
        .iter()
        .map(|c| left_cosets(&c.orbit.stabilizer))
        .collect();
    let mut coeffs = Vec::with_capacity(basis.len());
    let mut recon = Mat::zeros(m.ring.clone(), m.mat.rows, m.mat.cols);
    for el in basis {
        let col = xcharts[el.src_orbit].point_of_coset[0];
        let row = ycharts[el.tgt_orbit].point_of_coset[h_cosets[el.tgt_orbit].coset_of[el.g]];
        let c = m.mat.get(row, col).clone();
        recon = recon.add(&el.morphism.mat.scale(&c));
        coeffs.push(c);
    }
    if recon != m.mat {
        return Err(Error::SourceTargetMismatch(
            "matrix does not lie in the span of the hom basis".into(),
        ));
    }
    Ok(coeffs)
}

/// The canonical decomposition of a product of transitive G-sets: the
/// points of G/K x G/H split into double-coset orbits, each isomorphic to
/// G/(K n gHg^{-1}). The iso sends [c] in the g-summand to ([c], [c g]).
pub struct TensorDecomposition {
    /// (double coset representative, stabilizer K n gHg^{-1}) per summand
    pub summands: Vec<(usize, Subgroup)>,
    /// the disjoint union of the summands
    pub source: GSet,
    /// the product G/K x G/H
    pub target: GSet,
    /// bijective equivariant map realizing the iso
    pub map: EquivariantMap,
}

impl TensorDecomposition {
    pub fn iso_morphism(&self, ring: Ring) -> PermMorphism {
        linearize_map(&self.map, ring)
    }
}

pub fn tensor_decompose(k: &Subgroup, h: &Subgroup) -> Result<TensorDecomposition> {
    let group = Arc::clone(k.group());
    let gk = GSet::transitive(Arc::clone(&group), k);
    let gh = GSet::transitive(Arc::clone(&group), h);
    let target = gk.product(&gh);
    let k_cosets = left_cosets(k);
    let h_cosets = left_cosets(h);
    let dc = double_cosets(k, h);
    let mut summands = Vec::new();
    let mut source: Option<GSet> = None;
    let mut images = Vec::new();
    for &g in &dc.reps {
        let elems: Vec<usize> = k
            .elements()
            .iter()
            .copied()
            .filter(|&e| h.contains(group.conj(group.inv(g), e)))
            .collect();
        let m = Subgroup::new(Arc::clone(&group), elems)?;
        let piece = GSet::transitive(Arc::clone(&group), &m);
        let m_cosets = left_cosets(&m);
        for &c in &m_cosets.reps {
            let p = k_cosets.coset_of[c] * gh.size() + h_cosets.coset_of[group.mul(c, g)];
            images.push(p);
        }
        source = Some(match source {
            None => piece.clone(),
            Some(s) => s.disjoint_union(&piece),
        });
        summands.push((g, m));
    }
    let source = source.expect("at least one double coset");
    let map = EquivariantMap::new(source.clone(), target.clone(), images)?;
    // verify bijectivity
    let mut seen = vec![false; target.size()];
    for &p in &map.images {
        if seen[p] {
            return Err(Error::SourceTargetMismatch(
                "tensor decomposition failed to be injective".into(),
            ));
        }
        seen[p] = true;
    }
    if map.source.size() != target.size() {
        return Err(Error::SourceTargetMismatch(
            "tensor decomposition has the wrong size".into(),
        ));
    }
    Ok(TensorDecomposition { summands, source, target, map })
}

/// Induction of a K-set (given over K's own Cayley table) to the parent
/// group: points are pairs (coset of K, point), G acting by translating
/// the coset and pushing the carry into K.
pub fn induce_gset(k: &Subgroup, x: &GSet) -> Result<GSet> {
    let group = Arc::clone(k.group());
    let (kgroup, kelems) = k.as_group();
    if *x.group().as_ref() != *kgroup.as_ref() {
        return Err(Error::SourceTargetMismatch(
            "set is not given over the subgroup's own table".into(),
        ));
    }
    let mut kpos = vec![usize::MAX; group.order()];
    for (i, &e) in kelems.iter().enumerate() {
        kpos[e] = i;
    }
    let cosets = left_cosets(k);
    let n = cosets.reps.len();
    let size = n * x.size();
    let mut action = Vec::with_capacity(group.order() * size);
    for g in 0..group.order() {
        for c in 0..n {
            let w = group.mul(g, cosets.reps[c]);
            let c2 = cosets.coset_of[w];
            let carry = group.mul(group.inv(cosets.reps[c2]), w);
            let kidx = kpos[carry];
            for p in 0..x.size() {
                action.push(c2 * x.size() + x.act(kidx, p));
            }
        }
    }
    GSet::from_flat(group, size, action)
}

/// Transport an H-set along conjugation by g: the same points as a set for
/// gHg^{-1}, with h acting as g^{-1}hg did.
pub fn conjugate_gset(h: &Subgroup, x: &GSet, g: usize) -> Result<(Subgroup, GSet)> {
    let group = Arc::clone(h.group());
    let (hgroup, _helems) = h.as_group();
    if *x.group().as_ref() != *hgroup.as_ref() {
        return Err(Error::SourceTargetMismatch(
            "set is not given over the subgroup's own table".into(),
        ));
    }
    let hg = h.conjugate(g);
    let (cgroup, celems) = hg.as_group();
    let mut action = Vec::with_capacity(cgroup.order() * x.size());
    for &e in &celems {
        let back = group.conj(group.inv(g), e);
        let hidx = h.pos(back).expect("conjugate element returns to H");
        for p in 0..x.size() {
            action.push(x.act(hidx, p));
        }
    }
    Ok((hg, GSet::from_flat(cgroup, x.size(), action)?))
}

/// Two sets over the same group are isomorphic iff their orbit stabilizers
/// agree as a multiset of conjugacy classes.
pub fn gsets_isomorphic(a: &GSet, b: &GSet) -> bool {
    if *a.group().as_ref() != *b.group().as_ref() {
        return false;
    }
    let canon = |x: &GSet| -> Vec<Vec<usize>> {
        let group = x.group();
        let mut keys: Vec<Vec<usize>> = x
            .orbits()
            .iter()
            .map(|o| {
                let mut best = o.stabilizer.elements().to_vec();
                for g in 0..group.order() {
                    let cand = o.stabilizer.conjugate(g);
                    if cand.elements() < best.as_slice() {
                        best = cand.elements().to_vec();
                    }
                }
                best
            })
            .collect();
        keys.sort();
        keys
    };
    canon(a) == canon(b)
}

/// The double-coset decomposition of a restricted induction, checked at
/// the level of sets: res_K ind_H X is isomorphic to the disjoint union
/// over K\G/H of ind_{K n gHg^{-1}} res (g-conjugate of X).
pub fn mackey_formula_set_check(k: &Subgroup, h: &Subgroup, x: &GSet) -> Result<bool> {
    let group = Arc::clone(k.group());
    let lhs = induce_gset(h, x)?.restrict(k).gset;
    let (kgroup, kelems) = k.as_group();
    let mut kpos = vec![usize::MAX; group.order()];
    for (i, &e) in kelems.iter().enumerate() {
        kpos[e] = i;
    }
    let dc = double_cosets(k, h);
    let mut rhs: Option<GSet> = None;
    for &g in &dc.reps {
        let (hg, xg) = conjugate_gset(h, x, g)?;
        // K n gHg^{-1} as a subgroup of the conjugated group, then of K
        let inter = k.intersect(&hg);
        let m_in_hg = Subgroup::new(
            Arc::clone(xg.group()),
            inter
                .elements()
                .iter()
                .map(|&e| hg.pos(e).expect("element of the conjugate"))
                .collect(),
        )?;
        let restricted = xg.restrict(&m_in_hg).gset;
        let m_in_k = Subgroup::new(
            Arc::clone(&kgroup),
            inter.elements().iter().map(|&e| kpos[e]).collect(),
        )?;
        let piece = induce_gset(&m_in_k, &restricted)?;
        rhs = Some(match rhs {
            None => piece,
            Some(s) => s.disjoint_union(&piece),
        });
    }
    let rhs = rhs.expect("at least one double coset");
    Ok(gsets_isomorphic(&lhs, &rhs))
}

/// Pull a set on a quotient group back to the full group along the
/// projection.
pub fn inflate_gset(group: &Arc<Group>, proj: &[usize], q_set: &GSet) -> GSet {
    let size = q_set.size();
    let mut action = Vec::with_capacity(group.order() * size);
    for g in 0..group.order() {
        for p in 0..size {
            action.push(q_set.act(proj[g], p));
        }
    }
    GSet::new_unchecked(Arc::clone(group), size, action)
}

/// Pull an equivariant matrix over G/N back to G. The underlying matrix is
/// unchanged; only the actions are inflated.
pub fn inflate_morphism(n: &Subgroup, m: &PermMorphism) -> Result<PermMorphism> {
    let group = Arc::clone(n.group());
    let (q, proj) = quotient_group(n)?;
    if *m.source.group().as_ref() != *q.as_ref() {
        return Err(Error::SourceTargetMismatch(
            "morphism is not given over the quotient by this subgroup".into(),
        ));
    }
    let source = inflate_gset(&group, &proj, &m.source);
    let target = inflate_gset(&group, &proj, &m.target);
    PermMorphism::new(m.ring.clone(), source, target, m.mat.clone())
}

/// For a normal subgroup N and subgroups K, H containing it, projection
/// induces a bijection K\G/H -> (K/N)\(G/N)/(H/N). Checks every such pair.
pub fn inflation_double_coset_check(group: &Arc<Group>, n: &Subgroup) -> Result<bool> {
    let (q, proj) = quotient_group(n)?;
    let lat = all_subgroups(group, group.order().max(1))?;
    for k in &lat.subgroups {
        if !n.is_subset_of(k) {
            continue;
        }
        let kq = project_subgroup(&q, &proj, k);
        for h in &lat.subgroups {
            if !n.is_subset_of(h) {
                continue;
            }
            let hq = project_subgroup(&q, &proj, h);
            let dc = double_cosets(k, h);
            let dcq = double_cosets(&kq, &hq);
            if dc.reps.len() != dcq.reps.len() {
                return Ok(false);
            }
            let mut hit = vec![false; dcq.reps.len()];
            for &g in &dc.reps {
                let class = dcq.class_of[proj[g]];
                if hit[class] {
                    return Ok(false);
                }
                hit[class] = true;
            }
            if !hit.iter().all(|&b| b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn project_subgroup(q: &Arc<Group>, proj: &[usize], k: &Subgroup) -> Subgroup {
    let mut elems: Vec<usize> = k.elements().iter().map(|&e| proj[e]).collect();
    elems.sort_unstable();
    elems.dedup();
    Subgroup::new(Arc::clone(q), elems).expect("image of a subgroup")
}

/// Report for one pair of subgroup classes in the quotient comparison.
#[derive(Clone, Debug)]
pub struct QuotientPairReport {
    pub k_class: usize,
    pub h_class: usize,
    pub hom_rank: usize,
    pub span_rank: usize,
    pub surjective: bool,
    pub kernel_matches: bool,
}

/// Report of the full comparison between the span category and the
/// category of permutation modules over the given ring.
#[derive(Clone, Debug)]
pub struct QuotientReport {
    pub ring: Ring,
    pub pairs: Vec<QuotientPairReport>,
    pub holds: bool,
}

fn scalars_to_bigint(v: &[Scalar], ring: &Ring) -> Vec<BigInt> {
    v.iter()
        .map(|s| ring.lift(s).expect("integer coefficients"))
        .collect()
}

/// Linearization sends the span homs G/K -> G/H onto the equivariant homs,
/// with kernel spanned by the two-sided ideal of the index relations.
/// Checked for every pair of subgroup classes, over Z or a field.
pub fn quotient_equivalence_check(group: &Arc<Group>, ring: &Ring) -> Result<QuotientReport> {
    if let Ring::IntegersMod(_) = ring {
        return Err(Error::ShapeUnsupported {
            required: "Z, Q, or Fp coefficients".into(),
            found: ring.name(),
        });
    }
    let z = Ring::Integers;
    let lat = all_subgroups(group, group.order().max(1))?;
    let reps: Vec<&Subgroup> = lat.rep_subgroups();
    // precompute the span-basis and the ideal sandwiches over Z
    let mut pairs = Vec::new();
    let mut holds = true;
    for (ki, k) in reps.iter().enumerate() {
        for (hi, h) in reps.iter().enumerate() {
            let sb = omega_hom_basis(k, h);
            let keys: Vec<BasisKey> = sb
                .iter()
                .map(|(g, l)| BasisKey {
                    src_orbit: 0,
                    tgt_orbit: 0,
                    g: *g,
                    l: l.elements().to_vec(),
                })
                .collect();
            let key_index: BTreeMap<BasisKey, usize> = keys
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, k)| (k, i))
                .collect();
            let pm_basis = hom_basis(
                &GSet::transitive(Arc::clone(group), k),
                &GSet::transitive(Arc::clone(group), h),
                &z,
            );
            // columns: each span basis element linearized, in hom coordinates
            let mut c_cols: Vec<Vec<BigInt>> = Vec::with_capacity(sb.len());
            for (g, l) in &sb {
                let s = SpanSum::basis_element(z.clone(), k, h, *g, l);
                let coords = expand_in_basis(&linearize(&s), &pm_basis)?;
                c_cols.push(scalars_to_bigint(&coords, &z));
            }
            let rows = pm_basis.len();
            let c_mat: ZMat = (0..rows)
                .map(|r| c_cols.iter().map(|col| col[r].clone()).collect())
                .collect();
            // ideal sandwiches: beta o iota o alpha over all middle classes
            let mut products: Vec<Vec<BigInt>> = Vec::new();
            for w in &reps {
                let wlat = subgroup_lattice(w, w.order().max(1))?;
                for j in wlat.rep_subgroups() {
                    if j.order() == w.order() {
                        continue;
                    }
                    let iota = ideal_generator(j, w, z.clone())?;
                    for (ga, la) in omega_hom_basis(k, w) {
                        let alpha = SpanSum::basis_element(z.clone(), k, w, ga, &la);
                        let half = span_compose(&alpha, &iota)?;
                        for (gb, lb) in omega_hom_basis(w, h) {
                            let beta = SpanSum::basis_element(z.clone(), w, h, gb, &lb);
                            let full = span_compose(&half, &beta)?;
                            let mut vec = vec![BigInt::zero(); keys.len()];
                            for (key, coeff) in &full.terms {
                                let idx = *key_index
                                    .get(key)
                                    .expect("composite stays in the hom basis");
                                vec[idx] = z.lift(coeff).expect("integer");
                            }
                            products.push(vec);
                        }
                    }
                }
            }
            // every sandwich must linearize to zero
            for p in &products {
                for r in 0..rows {
                    let dot: BigInt = p
                        .iter()
                        .enumerate()
                        .map(|(cidx, x)| &c_mat[r][cidx] * x)
                        .sum();
                    if !dot.is_zero() {
                        return Err(Error::SourceTargetMismatch(
                            "an ideal element linearized to a nonzero matrix".into(),
                        ));
                    }
                }
            }
            let p_mat: ZMat = (0..keys.len())
                .map(|r| products.iter().map(|p| p[r].clone()).collect())
                .collect();
            let (surjective, kernel_matches) = match ring {
                Ring::Integers => {
                    let s = snf(&c_mat);
                    let surj = s.rank() == rows
                        && (0..rows).all(|i| s.d[i].magnitude() == &1u32.into());
                    let kb = int_kernel_basis(&c_mat);
                    let kern = kb.iter().all(|v| solve_int(&p_mat, v).is_some());
                    (surj, kern)
                }
                field => {
                    let cm = Mat::from_bigint_rows(field.clone(), &c_mat);
                    let rank_c = rank_field(&cm);
                    let surj = rank_c == rows;
                    let nullity = keys.len() - rank_c;
                    let pmat_f = Mat::from_bigint_rows(field.clone(), &p_mat);
                    let kern = rank_field(&pmat_f) == nullity;
                    (surj, kern)
                }
            };
            if !(surjective && kernel_matches) {
                holds = false;
            }
            pairs.push(QuotientPairReport {
                k_class: ki,
                h_class: hi,
                hom_rank: rows,
                span_rank: keys.len(),
                surjective,
                kernel_matches,
            });
        }
    }
    Ok(QuotientReport { ring: ring.clone(), pairs, holds })
}
