//! The Johnson morphism: an IA automorphism of Andreadakis degree `j` goes
//! to the degree-`j` derivation `x̄_i ↦ class of σ(x_i) x_i⁻¹` in `𝔏_{j+1}`.

use crate::aut::{andreadakis_degree, FreeEndo};
use crate::degree::FiltrationDegree;
use crate::error::{Error, Result};
use crate::lie::{Derivation, LieElement};
use crate::magnus::{gamma_degree, leading_lie_class};

pub fn johnson(sigma: &FreeEndo, d: usize) -> Result<Derivation> {
    let j = match andreadakis_degree(sigma, d)? {
        FiltrationDegree::Finite(j) => j,
        FiltrationDegree::Infinite => return Err(Error::IdentityInput),
        FiltrationDegree::AtLeast(_) => return Err(Error::DegreeUndetermined { truncation: d }),
    };
    let rank = sigma.rank();
    let images = (1..=rank.get())
        .map(|i| {
            let disp = sigma.displacement(i);
            if gamma_degree(&disp, d)? == FiltrationDegree::Finite(j + 1) {
                leading_lie_class(&disp, d)
            } else {
                Ok(LieElement::zero(rank))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Derivation::new(rank, j, images)
}
