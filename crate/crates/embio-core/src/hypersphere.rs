//! Geometric primitives on the unit hypersphere.
//!
//! Embeddings live in R^D with D >= 2. Unit vectors support cosine
//! similarity, geodesic angles, spherical linear interpolation along the
//! great circle, and renormalized mean prototypes. Interpolation factors
//! are drawn from a Beta distribution with caller-owned generators.
//!
//! All arithmetic is f64 regardless of what storage formats hold.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};
use crate::vecmath;

/// A unit flag is set when the L2 norm is within this distance of 1.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-6;

/// Norms at or below this floor have no usable direction.
pub const ZERO_NORM_FLOOR: f64 = 1e-12;

/// Angles within this margin of pi are treated as antipodal.
pub const ANTIPODAL_MARGIN: f64 = 1e-6;

/// Below this angle the endpoints coincide and slerp returns `mu` directly,
/// avoiding the 0/0 form of the interpolation weights.
const COINCIDENT_ANGLE: f64 = 1e-6;

/// A fixed-dimension real vector, flagged when it lies on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    values: Vec<f64>,
    unit: bool,
}

impl Embedding {
    /// Project `v` onto the unit sphere.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        let norm = vecmath::l2_norm(v);
        if !norm.is_finite() {
            return Err(Error::InvalidParameter {
                what: "vector contains non-finite values".into(),
            });
        }
        if norm <= ZERO_NORM_FLOOR {
            return Err(Error::ZeroVector { norm });
        }
        Ok(Embedding {
            values: v.iter().map(|x| x / norm).collect(),
            unit: true,
        })
    }

    /// Wrap raw values, detecting whether they already sit on the sphere.
    pub fn from_values(values: Vec<f64>) -> Self {
        let unit = (vecmath::l2_norm(&values) - 1.0).abs() <= UNIT_NORM_TOLERANCE;
        Embedding { values, unit }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// True when the L2 norm is 1 within [`UNIT_NORM_TOLERANCE`].
    pub fn is_unit(&self) -> bool {
        self.unit
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Shape parameters of the Beta distribution used for interpolation factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidParameter {
                what: format!("Beta alpha must be positive and finite, got {alpha}"),
            });
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidParameter {
                what: format!("Beta beta must be positive and finite, got {beta}"),
            });
        }
        Ok(BetaParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Cosine similarity of two unit embeddings: their dot product, clamped to
/// [-1, 1] so rounding never pushes it outside the arccos domain.
pub fn cosine(a: &Embedding, b: &Embedding) -> Result<f64> {
    vecmath::check_dims(a.dim(), b.dim())?;
    debug_assert!(a.is_unit() && b.is_unit(), "cosine expects unit embeddings");
    Ok(vecmath::dot(a.values(), b.values()).clamp(-1.0, 1.0))
}

/// Geodesic angle between two unit embeddings, in [0, pi].
pub fn angle(a: &Embedding, b: &Embedding) -> Result<f64> {
    Ok(cosine(a, b)?.acos())
}

/// Spherical linear interpolation from `mu` (at lambda=0) to `e` (at
/// lambda=1) along the great circle:
///
/// ```text
/// v(lambda) = sin((1-lambda)*theta)/sin(theta) * mu
///           + sin(lambda*theta)/sin(theta)     * e
/// ```
///
/// The result is renormalized onto the sphere. Near-coincident endpoints
/// return `mu`; antipodal endpoints are rejected because the geodesic
/// between them is not unique.
pub fn slerp(mu: &Embedding, e: &Embedding, lambda: f64) -> Result<Embedding> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter {
            what: format!("slerp lambda must lie in [0, 1], got {lambda}"),
        });
    }
    let theta = angle(mu, e)?;
    if theta < COINCIDENT_ANGLE {
        return Ok(mu.clone());
    }
    if theta >= std::f64::consts::PI - ANTIPODAL_MARGIN {
        return Err(Error::AntipodalPair { angle: theta });
    }
    let sin_theta = theta.sin();
    let w_mu = (((1.0 - lambda) * theta).sin()) / sin_theta;
    let w_e = ((lambda * theta).sin()) / sin_theta;
    let v: Vec<f64> = mu
        .values()
        .iter()
        .zip(e.values())
        .map(|(m, x)| w_mu * m + w_e * x)
        .collect();
    Embedding::normalize(&v)
}

/// Mean of a nonempty set of embeddings; renormalized onto the sphere by
/// default so the result can anchor further spherical operations.
pub fn prototype(embs: &[Embedding], renormalize: bool) -> Result<Embedding> {
    let rows: Vec<&[f64]> = embs.iter().map(|e| e.values()).collect();
    let mean = vecmath::mean_rows(&rows, "prototype input")?;
    let norm = vecmath::l2_norm(&mean);
    if norm <= ZERO_NORM_FLOOR {
        return Err(Error::ZeroVector { norm });
    }
    if renormalize {
        Embedding::normalize(&mean)
    } else {
        Ok(Embedding::from_values(mean))
    }
}

/// One draw from Beta(alpha, beta) using the caller's generator.
pub fn sample_lambda<R: Rng + ?Sized>(params: &BetaParams, rng: &mut R) -> f64 {
    // Params are validated at construction, so Beta::new cannot fail.
    let beta = Beta::new(params.alpha, params.beta).expect("validated Beta params");
    beta.sample(rng)
}
