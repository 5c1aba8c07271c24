use super::{dirichlet_form, CheckReport, FunctionTable};
use crate::error::{Error, Result};
use crate::space::StateSpace;
use crate::spec::MultisliceSpec;

/// Largest `N` for which the permutation space `S_N` is enumerated.
pub const MAX_PERMUTATION_POSITIONS: usize = 8;

pub const PROJECTION_TOL: f64 = 1e-12;

/// `Ψ(i) = ℓ` iff `κ₁ + ⋯ + κ_{ℓ−1} ≤ i < κ₁ + ⋯ + κ_ℓ` (0-based).
pub fn coarsening_map(spec: &MultisliceSpec) -> Vec<usize> {
    spec.canonical_indices()
}

/// `S_N` together with `σ ↦ Ψ(σ)` into an enumerated `Ω_κ`.
#[derive(Debug, Clone)]
pub struct Coarsening {
    permutations: StateSpace,
    image: Vec<usize>,
}

impl Coarsening {
    pub fn new(target: &StateSpace) -> Result<Self> {
        let n = target.positions();
        if n > MAX_PERMUTATION_POSITIONS {
            return Err(Error::too_large(
                format!("{n}! permutations"),
                (1..=MAX_PERMUTATION_POSITIONS as u128).product(),
            ));
        }
        let permutations = StateSpace::new(&MultisliceSpec::permutations(n)?, u128::MAX)?;
        let psi = coarsening_map(target.spec());
        let image = permutations
            .states()
            .iter()
            .map(|s| {
                let coarse: Vec<usize> = s.iter().map(|&v| psi[v]).collect();
                target.index_of(&coarse).expect("Ψ maps S_N onto Ω_κ")
            })
            .collect();
        Ok(Self { permutations, image })
    }

    pub fn permutations(&self) -> &StateSpace {
        &self.permutations
    }

    /// `f ∘ Ψ` on `S_N`.
    pub fn pull_back<'p>(&'p self, f: &FunctionTable<'_>) -> Result<FunctionTable<'p>> {
        FunctionTable::new(
            &self.permutations,
            self.image.iter().map(|&k| f.values()[k]).collect(),
        )
    }

    /// `𝔼_κ f = 𝔼_{(1,…,1)} f∘Ψ` and `𝓔_κ(f, g) = 𝓔_{(1,…,1)}(f∘Ψ, g∘Ψ)`.
    /// The report's `lhs` is the larger absolute discrepancy.
    pub fn check(&self, f: &FunctionTable<'_>, g: &FunctionTable<'_>) -> Result<CheckReport> {
        if f.values().len() != self.image.iter().max().map_or(0, |m| m + 1) {
            return Err(Error::ShapeMismatch("function does not live on the coarsened space".into()));
        }
        let (fp, gp) = (self.pull_back(f)?, self.pull_back(g)?);
        let mean_err = (f.mean() - fp.mean()).abs();
        let form_err = (dirichlet_form(f, g)? - dirichlet_form(&fp, &gp)?).abs();
        Ok(CheckReport::new(
            "projection-identities",
            f.space().spec().label(),
            None,
            mean_err.max(form_err),
            0.0,
            PROJECTION_TOL,
        ))
    }
}

pub fn check_projection_identities(f: &FunctionTable<'_>, g: &FunctionTable<'_>) -> Result<CheckReport> {
    Coarsening::new(f.space())?.check(f, g)
}
