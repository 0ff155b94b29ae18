//! Convex planar bodies given by a trigonometric support function
//!
//! ```text
//! h(θ) = a₀ + Σ_{k≥2} (a_k cos kθ + b_k sin kθ)
//! ```
//!
//! The radius of curvature is `ρ = h + h''`, the curvature `κ = 1/ρ`, and the
//! perimeter `L = ∫ρ dθ = 2π a₀`. Mode 1 is a translation and is not accepted.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 4096;
pub const MIN_SAMPLES: usize = 1024;

/// Relative size below which Fourier coefficients count as absent.
const CONGRUENCE_TOL: f64 = 1e-12;
/// Rounding slack (relative to `1/R`) granted to the curvature hypothesis.
const HYPOTHESIS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub k: u32,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexDomain {
    a0: f64,
    terms: Vec<FourierTerm>,
    #[serde(skip)]
    rho: Vec<f64>,
    perimeter: f64,
    kappa_min: f64,
    kappa_max: f64,
}

/// Builds the body and checks `ρ > 0` on `samples` equispaced angles.
pub fn domain_from_support(a0: f64, terms: &[FourierTerm], samples: usize) -> Result<ConvexDomain> {
    if !(a0 > 0.0) || !a0.is_finite() {
        return Err(Error::param(format!("a0 must be positive, got {a0}")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::param(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let mut sorted = terms.to_vec();
    sorted.sort_by_key(|t| t.k);
    for (i, t) in sorted.iter().enumerate() {
        if t.k < 2 {
            return Err(Error::param(format!("Fourier mode {} not allowed (modes start at 2)", t.k)));
        }
        if !t.a.is_finite() || !t.b.is_finite() {
            return Err(Error::param(format!("non-finite coefficient for mode {}", t.k)));
        }
        if i > 0 && sorted[i - 1].k == t.k {
            return Err(Error::param(format!("mode {} given twice", t.k)));
        }
    }
    let rho: Vec<f64> = (0..samples)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / samples as f64;
            a0 + sorted
                .iter()
                .map(|t| {
                    let k = f64::from(t.k);
                    let (s, c) = (k * theta).sin_cos();
                    (1.0 - k * k) * (t.a * c + t.b * s)
                })
                .sum::<f64>()
        })
        .collect();
    let (jmin, rho_min) = rho
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (j, r)| if r < best.1 { (j, r) } else { best });
    if rho_min <= 0.0 {
        return Err(Error::Domain(format!(
            "radius of curvature {rho_min:.6} <= 0 at theta = {:.6}; the body is not strictly convex",
            2.0 * PI * jmin as f64 / samples as f64
        )));
    }
    let rho_max = rho.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ConvexDomain {
        a0,
        terms: sorted,
        rho,
        perimeter: 2.0 * PI * a0,
        kappa_min: 1.0 / rho_max,
        kappa_max: 1.0 / rho_min,
    })
}

impl ConvexDomain {
    /// The disk of radius `r`.
    pub fn disk(r: f64) -> Result<Self> {
        domain_from_support(r, &[], DEFAULT_SAMPLES)
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn terms(&self) -> &[FourierTerm] {
        &self.terms
    }

    pub fn samples(&self) -> usize {
        self.rho.len()
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn kappa_min(&self) -> f64 {
        self.kappa_min
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    /// Radius of curvature on the sample grid `θ_j = 2πj/S`.
    pub fn radius_of_curvature(&self) -> &[f64] {
        &self.rho
    }

    /// Curvature on the sample grid.
    pub fn curvature(&self) -> Vec<f64> {
        self.rho.iter().map(|r| 1.0 / r).collect()
    }

    /// `∫₀^L κ ds` by the trapezoid rule in `s`, i.e. `∫ κ ρ dθ`; equals `2π`.
    pub fn total_curvature(&self) -> f64 {
        let h = 2.0 * PI / self.rho.len() as f64;
        self.rho.iter().map(|r| (1.0 / r) * r * h).sum()
    }

    /// `W(t) = ∫₀^{2π} κ/(1 + κt) dθ = ∫₀^{2π} dθ/(ρ + t)`.
    pub fn curvature_weight(&self, t: f64) -> f64 {
        let h = 2.0 * PI / self.rho.len() as f64;
        self.rho.iter().map(|r| 1.0 / (r + t)).sum::<f64>() * h
    }

    /// True iff every mode `k ≥ 2` vanishes up to `1e-12 a₀`.
    pub fn is_disk(&self) -> bool {
        self.terms.iter().all(|t| t.a.abs().max(t.b.abs()) <= CONGRUENCE_TOL * self.a0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintMargins {
    /// `1/R - max κ`.
    pub curvature: f64,
    /// `L - 2πR`.
    pub perimeter_excess: f64,
    pub congruent: bool,
    /// `max κ ≤ 1/R`, allowing a rounding slack of `1e-12/R`.
    pub hypothesis_satisfied: bool,
}

pub fn constraint_margins(d: &ConvexDomain, radius: f64) -> Result<ConstraintMargins> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param(format!("radius must be positive, got {radius}")));
    }
    let curvature = 1.0 / radius - d.kappa_max;
    Ok(ConstraintMargins {
        curvature,
        perimeter_excess: d.perimeter - 2.0 * PI * radius,
        congruent: d.is_disk(),
        hypothesis_satisfied: curvature >= -HYPOTHESIS_SLACK / radius,
    })
}

/// Parses the domain file format: lines `a0 <value>` and `coeff <k> <a_k> <b_k>`,
/// in any order; `#` starts a comment.
pub fn parse_domain(text: &str) -> Result<(f64, Vec<FourierTerm>)> {
    let mut a0 = None;
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let number = |s: &str| s.parse::<f64>().map_err(|_| err(format!("not a number: {s:?}")));
        match fields[0] {
            "a0" => {
                if fields.len() != 2 {
                    return Err(err("expected `a0 <value>`".into()));
                }
                if a0.is_some() {
                    return Err(err("a0 given twice".into()));
                }
                a0 = Some(number(fields[1])?);
            }
            "coeff" => {
                if fields.len() != 4 {
                    return Err(err("expected `coeff <k> <a_k> <b_k>`".into()));
                }
                let k: u32 = fields[1].parse().map_err(|_| err(format!("bad mode index {:?}", fields[1])))?;
                if k < 2 {
                    return Err(err(format!("mode {k} not allowed (modes start at 2)")));
                }
                terms.push(FourierTerm { k, a: number(fields[2])?, b: number(fields[3])? });
            }
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    let a0 = a0.ok_or(Error::Parse { line: 0, message: "missing a0".into() })?;
    Ok((a0, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse_like(a2: f64) -> ConvexDomain {
        domain_from_support(1.0, &[FourierTerm { k: 2, a: a2, b: 0.0 }], DEFAULT_SAMPLES).unwrap()
    }

    #[test]
    fn disk_data() {
        let d = ConvexDomain::disk(1.7).unwrap();
        assert!((d.kappa_max() - 1.0 / 1.7).abs() < 1e-15);
        assert!((d.kappa_min() - 1.0 / 1.7).abs() < 1e-15);
        assert!((d.perimeter() - 2.0 * PI * 1.7).abs() < 1e-14);
        let m = constraint_margins(&d, 1.7).unwrap();
        assert!(m.congruent && m.hypothesis_satisfied);
        assert!(m.curvature.abs() < 1e-15 && m.perimeter_excess.abs() < 1e-14);
    }

    #[test]
    fn two_term_example() {
        let d = ellipse_like(0.05);
        assert!((1.0 / d.kappa_max() - 0.85).abs() < 1e-14);
        assert!((1.0 / d.kappa_min() - 1.15).abs() < 1e-14);
        assert!((d.perimeter() - 2.0 * PI).abs() < 1e-15);
        let m = constraint_margins(&d, 0.85).unwrap();
        assert!(m.curvature.abs() < 1e-12);
        assert!(m.hypothesis_satisfied && !m.congruent);
        assert!(m.perimeter_excess > 0.0);
        let m = constraint_margins(&d, 1.0).unwrap();
        assert!(m.curvature < 0.0 && !m.hypothesis_satisfied);
    }

    #[test]
    fn rejects_nonconvex_and_bad_input() {
        assert!(matches!(
            domain_from_support(1.0, &[FourierTerm { k: 2, a: 0.4, b: 0.0 }], DEFAULT_SAMPLES),
            Err(Error::Domain(_))
        ));
        assert!(domain_from_support(1.0, &[FourierTerm { k: 1, a: 0.1, b: 0.0 }], DEFAULT_SAMPLES).is_err());
        assert!(domain_from_support(-1.0, &[], DEFAULT_SAMPLES).is_err());
        assert!(domain_from_support(1.0, &[], 512).is_err());
        let dup = [FourierTerm { k: 3, a: 0.01, b: 0.0 }, FourierTerm { k: 3, a: 0.0, b: 0.01 }];
        assert!(domain_from_support(1.0, &dup, DEFAULT_SAMPLES).is_err());
    }

    #[test]
    fn weight_closed_form_for_two_term_body() {
        // ρ = 1 - 3a₂ cos 2θ, so W(t) = 2π / sqrt((1+t)² - 9a₂²)
        let a2 = 0.05;
        let d = ellipse_like(a2);
        for t in [0.0f64, 0.3, 2.0, 50.0] {
            let exact = 2.0 * PI / ((1.0 + t).powi(2) - 9.0 * a2 * a2).sqrt();
            assert!((d.curvature_weight(t) - exact).abs() < 1e-13 * exact);
        }
    }

    #[test]
    fn total_curvature_is_two_pi() {
        let d = domain_from_support(
            2.0,
            &[FourierTerm { k: 2, a: 0.1, b: -0.05 }, FourierTerm { k: 5, a: 0.01, b: 0.02 }],
            DEFAULT_SAMPLES,
        )
        .unwrap();
        assert!((d.total_curvature() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn parses_domain_file() {
        let text = "# ellipse-like\ncoeff 2 0.05 0\n\na0 1.0\ncoeff 3 0 0.01  # small\n";
        let (a0, terms) = parse_domain(text).unwrap();
        assert_eq!(a0, 1.0);
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[1], FourierTerm { k: 3, a: 0.0, b: 0.01 });
        assert!(matches!(parse_domain("a0 1\nradius 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_domain("a0 1\ncoeff 1 0.1 0\n").is_err());
        assert!(parse_domain("coeff 2 0.1 0\n").is_err());
        assert!(parse_domain("a0 x\n").is_err());
    }
}
