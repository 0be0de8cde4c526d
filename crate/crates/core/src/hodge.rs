//! Hodge numbers of the threefold `X_g` attached to a profile with `l = 2`.
//!
//! `h¹¹ = b₂` comes from the Shioda–Tate count `ρ_h + 1 + Σ_p (ρ_p − 1)`
//! over the singular fibres. `h²¹` is computed twice: from the closed form
//! `k + (m_odd − n)/2` and from the monodromy pipeline as
//! `(h¹(P¹, j_* g^*V) − 2)/2`; the two must agree.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{fibre_components, Fibre, RamificationProfile, SmoothnessReport};

/// Horizontal Picard rank: the generic fibre's Néron–Severi lattice is
/// exactly the rank 19 lattice `M2`.
pub const RHO_H: i64 = 19;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreCount {
    pub fibre: Fibre,
    pub components: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeData {
    pub h11: i64,
    pub h21: i64,
    pub b2: i64,
    pub b3: i64,
    pub b4: i64,
    pub euler: i64,
    pub rho_h: i64,
    pub component_census: Vec<FibreCount>,
    pub smoothness: SmoothnessReport,
    /// Set when `m < n`: the values describe a crepant resolution that may
    /// not exist.
    pub conditional_on_crepant_resolution: bool,
}

fn require_l2(p: &RamificationProfile) -> Result<()> {
    p.require_calabi_yau()?;
    if p.l() != 2 {
        return Err(Error::Unsupported(format!(
            "{p}: Hodge numbers are only computed for l = 2; y = [8] is a smooth degeneration of y = [4,4]"
        )));
    }
    Ok(())
}

/// Singular fibres over preimages of `0` and `∞`, in profile order.
pub fn component_census(p: &RamificationProfile) -> Result<Vec<FibreCount>> {
    let over_zero = p.x().parts().iter().map(|&x| Fibre::OverZero(x));
    let over_inf = p.y().parts().iter().map(|&y| Fibre::OverInfinity(y));
    over_zero
        .chain(over_inf)
        .map(|fibre| {
            Ok(FibreCount {
                fibre,
                components: fibre_components(fibre)?,
            })
        })
        .collect()
}

pub fn h11(p: &RamificationProfile) -> Result<i64> {
    require_l2(p)?;
    let census = component_census(p)?;
    let extra: i64 = census.iter().map(|c| c.components as i64 - 1).sum();
    Ok(RHO_H + 1 + extra)
}

pub fn h21_closed_form(p: &RamificationProfile) -> Result<i64> {
    require_l2(p)?;
    let diff = p.m_odd() as i64 - p.n() as i64;
    if diff % 2 != 0 {
        return Err(Error::Inconsistent(format!("{p}: m_odd - n = {diff} is odd")));
    }
    let h21 = p.k() as i64 + diff / 2;
    if h21 < 0 {
        return Err(Error::Inconsistent(format!("{p}: closed form gives h21 = {h21} < 0")));
    }
    Ok(h21)
}

/// `h²¹` from the local-system route, `b₃ = 2 + 2h²¹ = h¹(P¹, j_* g^*V)`.
pub fn h21_from_monodromy(p: &RamificationProfile) -> Result<i64> {
    require_l2(p)?;
    let b3 = p.h1_pullback();
    if b3 < 2 || b3 % 2 != 0 {
        return Err(Error::Inconsistent(format!("{p}: h1 of the pulled-back system is {b3}")));
    }
    Ok((b3 - 2) / 2)
}

pub fn hodge_summary(p: &RamificationProfile) -> Result<HodgeData> {
    let h11 = h11(p)?;
    let h21 = h21_closed_form(p)?;
    let via_monodromy = h21_from_monodromy(p)?;
    if h21 != via_monodromy {
        return Err(Error::CrossCheck(format!(
            "{p}: closed-form h21 = {h21} but monodromy gives {via_monodromy}"
        )));
    }
    let smoothness = p.smoothness()?;
    Ok(HodgeData {
        h11,
        h21,
        b2: h11,
        b3: 2 + 2 * h21,
        b4: h11,
        euler: 2 * (h11 - h21),
        rho_h: RHO_H,
        component_census: component_census(p)?,
        conditional_on_crepant_resolution: !smoothness.smooth,
        smoothness,
    })
}

/// Hodge data, or the reason it cannot be computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HodgeStatus {
    Available(HodgeData),
    Unavailable(String),
}

impl HodgeStatus {
    pub fn of(p: &RamificationProfile) -> Self {
        match hodge_summary(p) {
            Ok(h) => HodgeStatus::Available(h),
            Err(e) => HodgeStatus::Unavailable(e.to_string()),
        }
    }

    pub fn data(&self) -> Option<&HodgeData> {
        match self {
            HodgeStatus::Available(h) => Some(h),
            HodgeStatus::Unavailable(_) => None,
        }
    }
}
