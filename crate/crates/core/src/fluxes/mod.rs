//! Two-point numerical fluxes.
//!
//! Fluxes that only know a constant bottom (LLF, Suliciu, kinetic) are lifted
//! to varying bottoms by hydrostatic reconstruction; the entropy conservative
//! family and the LLF-type flux carry their own source contributions.

mod dissipative;
mod ec;
mod hydrostatic;
mod kinetic;
mod suliciu;

pub use dissipative::{es_flux_llf_type, llf_flux};
pub use ec::{ec_flux, ec_flux_entropy_form, ec_flux_extended};
pub use hydrostatic::hydrostatic_reconstruction;
pub use kinetic::{kinetic_flux, kinetic_half_flux, HalfFluxSide};
pub use suliciu::{suliciu_flux, suliciu_wave_speeds};

pub(crate) use dissipative::{llf_prim, llf_type_prim};
pub(crate) use ec::ec_ext_prim;
pub(crate) use hydrostatic::hydrostatic_prim;
pub(crate) use kinetic::{kinetic_prim, kinetic_speed};
pub(crate) use suliciu::suliciu_prim;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SweError};
use crate::physics::{PhysicsContext, SweState};

/// Family parameters `(a1, a2)` and the free surface-term parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxParams {
    pub a1: f64,
    pub a2: f64,
    #[serde(default)]
    pub m4: f64,
    #[serde(default)]
    pub k9: f64,
    #[serde(default)]
    pub k10: f64,
    #[serde(default)]
    pub k11: f64,
    #[serde(default)]
    pub l10: f64,
}

impl FluxParams {
    pub fn new(a1: f64, a2: f64) -> Self {
        Self {
            a1,
            a2,
            m4: 0.0,
            k9: 0.0,
            k10: 0.0,
            k11: 0.0,
            l10: 0.0,
        }
    }

    /// `a2 = (2 - a1) / 3`.
    pub fn one_parameter(a1: f64) -> Self {
        Self::new(a1, (2.0 - a1) / 3.0)
    }

    pub fn with_free(mut self, m4: f64, k9: f64, k10: f64, k11: f64, l10: f64) -> Self {
        self.m4 = m4;
        self.k9 = k9;
        self.k10 = k10;
        self.k11 = k11;
        self.l10 = l10;
        self
    }

    pub fn one_param_consistent(&self) -> bool {
        (self.a2 - (2.0 - self.a1) / 3.0).abs() <= 1e-14
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a1, self.a2, self.m4, self.k9, self.k10, self.k11, self.l10];
        if all.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(SweError::NonFinite("flux parameters"))
        }
    }
}

impl Default for FluxParams {
    fn default() -> Self {
        Self::one_parameter(-1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxPair {
    pub h: f64,
    pub hv: f64,
}

/// Flux whose discharge component depends on the side it is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExtendedFluxPair {
    pub h: f64,
    pub hv_into_left: f64,
    pub hv_into_right: f64,
}

impl ExtendedFluxPair {
    pub fn symmetric(f: FluxPair) -> Self {
        Self {
            h: f.h,
            hv_into_left: f.hv,
            hv_into_right: f.hv,
        }
    }
}

/// One side of an interface in primitive form.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Trace {
    pub h: f64,
    pub v: f64,
    pub b: f64,
}

impl Trace {
    pub fn new(h: f64, v: f64, b: f64) -> Self {
        Self { h, v, b }
    }

    pub fn from_state(s: SweState, b: f64, ctx: &PhysicsContext) -> Self {
        Self {
            h: s.h,
            v: ctx.vel(s.h, s.hv),
            b,
        }
    }
}

/// Flat-bottom fluxes usable inside the hydrostatic reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantBottomFlux {
    Llf,
    Suliciu,
    Kinetic,
}

impl ConstantBottomFlux {
    #[inline]
    pub(crate) fn eval(self, hl: f64, vl: f64, hr: f64, vr: f64, g: f64) -> FluxPair {
        match self {
            ConstantBottomFlux::Llf => llf_prim(hl, vl, hr, vr, g),
            ConstantBottomFlux::Suliciu => suliciu_prim(hl, vl, hr, vr, g),
            ConstantBottomFlux::Kinetic => kinetic_prim(hl, vl, hr, vr, g),
        }
    }
}

/// Interface flux used for the element coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceFlux {
    /// Entropy conservative member `(a1, a2)`, source-extended.
    Ec { a1: f64, a2: f64 },
    /// One-parameter EC flux with LLF-type entropy dissipation.
    LlfType { a1: f64 },
    /// Flat-bottom flux combined with hydrostatic reconstruction.
    Hydrostatic { inner: ConstantBottomFlux },
}

impl SurfaceFlux {
    pub fn parse(name: &str, a1: f64, a2: f64) -> Result<Self> {
        match name {
            "ec" => Ok(SurfaceFlux::Ec { a1, a2 }),
            "llf_type" => Ok(SurfaceFlux::LlfType { a1 }),
            "llf" => Ok(SurfaceFlux::Hydrostatic {
                inner: ConstantBottomFlux::Llf,
            }),
            "suliciu" => Ok(SurfaceFlux::Hydrostatic {
                inner: ConstantBottomFlux::Suliciu,
            }),
            "kinetic" => Ok(SurfaceFlux::Hydrostatic {
                inner: ConstantBottomFlux::Kinetic,
            }),
            other => Err(SweError::Config(format!("unknown flux '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceFlux::Ec { .. } => "ec",
            SurfaceFlux::LlfType { .. } => "llf_type",
            SurfaceFlux::Hydrostatic { inner } => match inner {
                ConstantBottomFlux::Llf => "llf",
                ConstantBottomFlux::Suliciu => "suliciu",
                ConstantBottomFlux::Kinetic => "kinetic",
            },
        }
    }

    pub fn is_entropy_conservative(&self) -> bool {
        matches!(self, SurfaceFlux::Ec { .. })
    }

    #[inline]
    pub fn interface(&self, l: Trace, r: Trace, g: f64) -> ExtendedFluxPair {
        match *self {
            SurfaceFlux::Ec { a1, a2 } => ec_ext_prim(l, r, a1, a2, g),
            SurfaceFlux::LlfType { a1 } => llf_type_prim(l, r, a1, g),
            SurfaceFlux::Hydrostatic { inner } => hydrostatic_prim(inner, l, r, g),
        }
    }
}

pub(crate) fn check_pair(what: &'static str, ul: SweState, ur: SweState) -> Result<()> {
    for s in [ul, ur] {
        if !(s.h.is_finite() && s.hv.is_finite()) {
            return Err(SweError::NonFinite(what));
        }
        if s.h < 0.0 {
            return Err(SweError::NegativeHeight { h: s.h });
        }
    }
    Ok(())
}
