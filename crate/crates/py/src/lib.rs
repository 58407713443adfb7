//! Python bindings for the engine. The surface mirrors the main library
//! types: finite groups with their subgroup/double-coset combinatorics,
//! the span-category hom bases, equivariant chain complexes, and the
//! self-checking suite (returned as a JSON report).

use mackeykit_core::chains::{
    cp_example, fixed_point_complex, is_contractible, is_gamma_acyclic, ChainComplex,
};
use mackeykit_core::error::Error;
use mackeykit_core::group::{all_subgroups, configured_max_group, double_cosets, Group as CoreGroup};
use mackeykit_core::gset::GSet;
use mackeykit_core::io::{canonical_json, error_code, subgroup_from_elements, ComplexDoc, GroupDoc};
use mackeykit_core::perm::{hom_rank, linearize};
use mackeykit_core::ring::Ring;
use mackeykit_core::span::{ideal_generator, omega_hom_basis};
use mackeykit_core::suite::run_suite;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::sync::Arc;

fn pyerr(e: Error) -> PyErr {
    PyValueError::new_err(format!("{} [{}]", e, error_code(&e)))
}

/// A finite group presented by its multiplication table; element 0 is the
/// identity.
#[pyclass(frozen)]
struct Group {
    inner: Arc<CoreGroup>,
}

#[pymethods]
impl Group {
    #[new]
    fn new(cayley: Vec<Vec<usize>>) -> PyResult<Group> {
        let inner = CoreGroup::from_cayley_table(&cayley).map_err(pyerr)?;
        Ok(Group { inner })
    }

    /// Look up a group by name: C{n}, S{n}, D{n} or V4.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Group> {
        let inner = GroupDoc::named(name).build().map_err(pyerr)?;
        Ok(Group { inner })
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn cayley(&self) -> Vec<Vec<usize>> {
        GroupDoc::from_group(&self.inner).cayley.expect("table")
    }

    /// Every subgroup, each as a sorted list of element indices.
    fn subgroups(&self) -> PyResult<Vec<Vec<usize>>> {
        let lat = all_subgroups(&self.inner, configured_max_group()).map_err(pyerr)?;
        Ok(lat.subgroups.iter().map(|s| s.elements().to_vec()).collect())
    }

    /// Minimal representatives of the double cosets K\G/H.
    fn double_cosets(&self, k: Vec<usize>, h: Vec<usize>) -> PyResult<Vec<usize>> {
        let k = subgroup_from_elements(&self.inner, &k).map_err(pyerr)?;
        let h = subgroup_from_elements(&self.inner, &h).map_err(pyerr)?;
        Ok(double_cosets(&k, &h).reps)
    }

    /// The span-category hom basis from G/K to G/H, as (g, L) pairs.
    fn omega_basis(&self, k: Vec<usize>, h: Vec<usize>) -> PyResult<Vec<(usize, Vec<usize>)>> {
        let k = subgroup_from_elements(&self.inner, &k).map_err(pyerr)?;
        let h = subgroup_from_elements(&self.inner, &h).map_err(pyerr)?;
        Ok(omega_hom_basis(&k, &h)
            .into_iter()
            .map(|(g, l)| (g, l.elements().to_vec()))
            .collect())
    }

    /// Rank of the equivariant hom module between two transitive
    /// permutation modules; equals the number of double cosets.
    fn hom_rank(&self, k: Vec<usize>, h: Vec<usize>) -> PyResult<usize> {
        let k = subgroup_from_elements(&self.inner, &k).map_err(pyerr)?;
        let h = subgroup_from_elements(&self.inner, &h).map_err(pyerr)?;
        let x = GSet::transitive(Arc::clone(&self.inner), &k);
        let y = GSet::transitive(Arc::clone(&self.inner), &h);
        Ok(hom_rank(&x, &y))
    }

    /// True when the relation attached to a nested pair J <= W linearizes
    /// to the zero morphism, i.e. lies in the kernel of the span-to-hom
    /// functor.
    fn ideal_generator_vanishes(&self, ring: &str, j: Vec<usize>, w: Vec<usize>) -> PyResult<bool> {
        let ring = Ring::parse(ring).map_err(pyerr)?;
        let j = subgroup_from_elements(&self.inner, &j).map_err(pyerr)?;
        let w = subgroup_from_elements(&self.inner, &w).map_err(pyerr)?;
        let sum = ideal_generator(&j, &w, ring).map_err(pyerr)?;
        Ok(linearize(&sum).is_zero())
    }

    /// Run the verification battery over the given coefficient ring and
    /// return the canonical JSON report.
    fn suite(&self, ring: &str, seed: u64) -> PyResult<String> {
        let ring = Ring::parse(ring).map_err(pyerr)?;
        let report = run_suite("py", &self.inner, &ring, seed).map_err(pyerr)?;
        canonical_json(&report).map_err(pyerr)
    }
}

/// An equivariant chain complex of permutation modules.
#[pyclass(frozen)]
struct Complex {
    inner: ChainComplex,
    group_doc: GroupDoc,
}

#[pymethods]
impl Complex {
    /// The 2-periodic cyclic-group complex over the prime field F_p; it is
    /// acyclic on every fixed-point level yet not equivariantly
    /// contractible for odd p.
    #[staticmethod]
    fn cp_example(p: u64) -> PyResult<Complex> {
        let ring = Ring::PrimeField(p);
        ring.validate().map_err(pyerr)?;
        let inner = cp_example(p, &ring).map_err(pyerr)?;
        Ok(Complex {
            inner,
            group_doc: GroupDoc::named(&format!("C{p}")),
        })
    }

    fn is_contractible(&self) -> PyResult<bool> {
        is_contractible(&self.inner).map_err(pyerr)
    }

    fn is_gamma_acyclic(&self) -> PyResult<bool> {
        Ok(is_gamma_acyclic(&self.inner).map_err(pyerr)?.acyclic)
    }

    /// Homology of the H-fixed subcomplex in one degree, as
    /// (free_rank, torsion).
    fn homology(&self, subgroup: Vec<usize>, degree: i64) -> PyResult<(usize, Vec<String>)> {
        let h = subgroup_from_elements(self.inner.group(), &subgroup).map_err(pyerr)?;
        let inv = fixed_point_complex(&self.inner, &h).homology(degree);
        Ok((
            inv.free_rank,
            inv.torsion.iter().map(|t| t.to_string()).collect(),
        ))
    }

    fn to_json(&self) -> PyResult<String> {
        canonical_json(&ComplexDoc::from_complex(&self.group_doc, &self.inner)).map_err(pyerr)
    }
}

#[pymodule]
fn mackeykit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_class::<Complex>()?;
    Ok(())
}
