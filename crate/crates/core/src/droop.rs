//! Frequency droop on the electrical side and its vessel counterpart.
//!
//! | vessels                | grid-forming sources |
//! |------------------------|----------------------|
//! | water level            | frequency            |
//! | base reference level   | nominal frequency    |
//! | cross-sectional area A | 1 / droop slope      |
//! | exited water volume    | real power           |
//! | block elevation        | power setpoint       |
//! | pipes                  | cables               |
//!
//! A straight-walled vessel reproduces the linear droop law exactly. A shaped
//! vessel reproduces a non-linear droop curve whose local slope is the
//! reciprocal of the local cross-section.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::{level_from_volume, AreaProfile, ProfileError, Segment};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DroopError {
    #[error("{name} must be > 0 (got {value})")]
    NonPositive { name: &'static str, value: f64 },
    #[error("unit map is not invertible (hz_per_cm = {hz_per_cm}, watts_per_cm3 = {watts_per_cm3})")]
    NonInvertibleUnitMap { hz_per_cm: f64, watts_per_cm3: f64 },
    #[error("power {power} W is beyond the vessel capacity")]
    BeyondCapacity { power: f64 },
    #[error("nominal frequency {f_nom} Hz maps outside the vessel height range")]
    NominalOutOfRange { f_nom: f64 },
    #[error("droop curve needs at least 2 points (got {0})")]
    TooFewPoints(usize),
    #[error("droop curve segment {0} has zero slope")]
    ZeroSlope(usize),
    #[error("droop curve segment {0} has infinite slope")]
    InfiniteSlope(usize),
    #[error("droop curve segment {0} is not decreasing")]
    NotDecreasing(usize),
    #[error("droop curve point {0} is not finite")]
    NonFinite(usize),
    #[error("droop curve reaches below the vessel floor (level {level} cm)")]
    BelowFloor { level: f64 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, DroopError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(DroopError::NonPositive { name, value })
    }
}

/// Affine correspondence between hydraulic and electrical units.
///
/// `frequency = hz_offset + hz_per_cm · level` and
/// `power = watts_per_cm3 · volume`. The identity map reads 60 cm as 60 Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitMap {
    pub hz_per_cm: f64,
    #[serde(default)]
    pub hz_offset: f64,
    pub watts_per_cm3: f64,
}

impl Default for UnitMap {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl UnitMap {
    pub const IDENTITY: UnitMap = UnitMap {
        hz_per_cm: 1.0,
        hz_offset: 0.0,
        watts_per_cm3: 1.0,
    };

    pub fn check(&self) -> Result<(), DroopError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.hz_per_cm) && ok(self.watts_per_cm3) && self.hz_offset.is_finite() {
            Ok(())
        } else {
            Err(DroopError::NonInvertibleUnitMap {
                hz_per_cm: self.hz_per_cm,
                watts_per_cm3: self.watts_per_cm3,
            })
        }
    }

    pub fn frequency(&self, level: f64) -> f64 {
        self.hz_offset + self.hz_per_cm * level
    }

    pub fn level(&self, frequency: f64) -> f64 {
        (frequency - self.hz_offset) / self.hz_per_cm
    }

    pub fn power(&self, volume: f64) -> f64 {
        self.watts_per_cm3 * volume
    }

    pub fn volume(&self, power: f64) -> f64 {
        power / self.watts_per_cm3
    }

    /// Droop slope of a straight vessel of cross-section `area`.
    pub fn slope_for_area(&self, area: f64) -> f64 {
        self.hz_per_cm / (self.watts_per_cm3 * area)
    }

    /// Cross-section of a straight vessel with droop slope `m_p`.
    pub fn area_for_slope(&self, m_p: f64) -> f64 {
        self.hz_per_cm / (self.watts_per_cm3 * m_p)
    }
}

/// Linear droop law parameters for one source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroopParameters {
    pub f_nom: f64,
    pub m_p: f64,
    pub p_ref: f64,
    pub s_rated: Option<f64>,
    pub delta_f: Option<f64>,
}

impl DroopParameters {
    pub fn new(f_nom: f64, m_p: f64, p_ref: f64) -> Result<Self, DroopError> {
        Ok(DroopParameters {
            f_nom,
            m_p: positive("m_p", m_p)?,
            p_ref,
            s_rated: None,
            delta_f: None,
        })
    }

    /// Picks the slope from the allowed frequency drop at rated power.
    pub fn from_rating(f_nom: f64, delta_f: f64, s_rated: f64, p_ref: f64) -> Result<Self, DroopError> {
        Ok(DroopParameters {
            f_nom,
            m_p: droop_slope(delta_f, s_rated)?,
            p_ref,
            s_rated: Some(s_rated),
            delta_f: Some(delta_f),
        })
    }
}

/// `f = f_nom − m_p · (P − P_ref)`.
pub fn droop_frequency(params: &DroopParameters, power: f64) -> f64 {
    params.f_nom - params.m_p * (power - params.p_ref)
}

/// `m_p = Δf / S_rated`.
pub fn droop_slope(delta_f: f64, s_rated: f64) -> Result<f64, DroopError> {
    Ok(positive("delta_f", delta_f)? / positive("s_rated", s_rated)?)
}

/// Cross-sectional area of the vessel mirroring droop slope `m_p` (`A = 1 / m_p`).
pub fn area_from_slope(m_p: f64) -> Result<f64, DroopError> {
    Ok(1.0 / positive("m_p", m_p)?)
}

/// Droop slope mirrored by a vessel of cross-section `area` (`m_p = 1 / A`).
pub fn slope_from_area(area: f64) -> Result<f64, DroopError> {
    Ok(1.0 / positive("area", area)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Linear,
    Convex,
    PiecewiseLinear,
    Sampled,
}

/// A droop characteristic as `(P, f)` samples, linear between samples.
///
/// Power strictly increases and frequency strictly decreases along the
/// samples, so every segment has a finite, non-zero slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct DroopCurve {
    points: Vec<(f64, f64)>,
    kind: CurveKind,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    points: Vec<(f64, f64)>,
    kind: CurveKind,
}

impl TryFrom<RawCurve> for DroopCurve {
    type Error = DroopError;
    fn try_from(raw: RawCurve) -> Result<Self, DroopError> {
        DroopCurve::new(raw.points, raw.kind)
    }
}

impl From<DroopCurve> for RawCurve {
    fn from(c: DroopCurve) -> Self {
        RawCurve {
            points: c.points,
            kind: c.kind,
        }
    }
}

impl DroopCurve {
    pub fn new(points: Vec<(f64, f64)>, kind: CurveKind) -> Result<Self, DroopError> {
        if points.len() < 2 {
            return Err(DroopError::TooFewPoints(points.len()));
        }
        if let Some(i) = points.iter().position(|(p, f)| !p.is_finite() || !f.is_finite()) {
            return Err(DroopError::NonFinite(i));
        }
        for (i, w) in points.windows(2).enumerate() {
            let (dp, df) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            if dp == 0.0 {
                return Err(DroopError::InfiniteSlope(i));
            }
            if df == 0.0 {
                return Err(DroopError::ZeroSlope(i));
            }
            if dp < 0.0 || df > 0.0 {
                return Err(DroopError::NotDecreasing(i));
            }
        }
        Ok(DroopCurve { points, kind })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    /// Droop slope `−df/dP` of each segment.
    pub fn slopes(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| (w[0].1 - w[1].1) / (w[1].0 - w[0].0))
            .collect()
    }

    pub fn power_range(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Frequency at `power`, linearly interpolated.
    pub fn frequency_at(&self, power: f64) -> Result<f64, DroopError> {
        let (lo, hi) = self.power_range();
        if !(lo..=hi).contains(&power) {
            return Err(DroopError::BeyondCapacity { power });
        }
        let i = self
            .points
            .partition_point(|pt| pt.0 <= power)
            .clamp(1, self.points.len() - 1);
        let ((p0, f0), (p1, f1)) = (self.points[i - 1], self.points[i]);
        Ok(f0 + (f1 - f0) * (power - p0) / (p1 - p0))
    }
}

fn usable_top(profile: &AreaProfile, max_height: f64) -> f64 {
    profile.extent().map_or(max_height, |e| e.min(max_height))
}

fn nominal_level(profile: &AreaProfile, max_height: f64, f_nom: f64, unit: &UnitMap) -> Result<f64, DroopError> {
    unit.check()?;
    let h_nom = unit.level(f_nom);
    if !(0.0..=usable_top(profile, max_height)).contains(&h_nom) {
        return Err(DroopError::NominalOutOfRange { f_nom });
    }
    Ok(h_nom)
}

/// Exact droop frequency of a shaped vessel at output `power`.
///
/// Solves `P − P_ref = ∫_f^{f_nom} A(u) du` (in the unit map's scale) for `f`:
/// the source delivers power by draining the vessel from its nominal level.
pub fn frequency_from_profile(
    profile: &AreaProfile,
    max_height: f64,
    f_nom: f64,
    p_ref: f64,
    unit: &UnitMap,
    power: f64,
) -> Result<f64, DroopError> {
    let h_nom = nominal_level(profile, max_height, f_nom, unit)?;
    if power == p_ref {
        return Ok(f_nom);
    }
    let top = usable_top(profile, max_height);
    let volume = profile.volume_extended(h_nom) - unit.volume(power - p_ref);
    if !(0.0..=profile.volume_extended(top)).contains(&volume) {
        return Err(DroopError::BeyondCapacity { power });
    }
    Ok(unit.frequency(level_from_volume(profile, volume)?))
}

const SAMPLED_SUBDIVISIONS: usize = 16;

/// Samples the droop curve a vessel of the given shape produces, from full
/// (lowest power) to empty (highest power).
///
/// Samples sit on every area break and on the nominal point, so stepped
/// profiles give an exact piecewise-linear curve. Sampled profiles are
/// subdivided between their sample heights.
pub fn droop_curve_from_profile(
    profile: &AreaProfile,
    max_height: f64,
    f_nom: f64,
    p_ref: f64,
    unit: &UnitMap,
) -> Result<DroopCurve, DroopError> {
    let h_nom = nominal_level(profile, max_height, f_nom, unit)?;
    let top = usable_top(profile, max_height);

    let mut heights = vec![0.0, top, h_nom];
    match profile {
        AreaProfile::Uniform { .. } => {}
        AreaProfile::PiecewiseConstant { .. } => heights.extend(profile.breakpoints()),
        AreaProfile::Sampled { .. } => {
            let breaks = profile.breakpoints();
            for w in breaks.windows(2) {
                for k in 0..SAMPLED_SUBDIVISIONS {
                    heights.push(w[0] + (w[1] - w[0]) * k as f64 / SAMPLED_SUBDIVISIONS as f64);
                }
            }
        }
    }
    heights.retain(|&h| (0.0..=top).contains(&h));
    heights.sort_by(|a, b| b.total_cmp(a));
    heights.dedup();

    let v_nom = profile.volume_extended(h_nom);
    let points = heights
        .iter()
        .map(|&h| (p_ref + unit.power(v_nom - profile.volume_extended(h)), unit.frequency(h)))
        .collect();
    let kind = match profile {
        AreaProfile::Uniform { .. } => CurveKind::Linear,
        AreaProfile::PiecewiseConstant { segments } if segments.len() == 1 => CurveKind::Linear,
        AreaProfile::PiecewiseConstant { .. } => CurveKind::PiecewiseLinear,
        AreaProfile::Sampled { .. } => CurveKind::Sampled,
    };
    DroopCurve::new(points, kind)
}

const SAME_AREA_RTOL: f64 = 1e-9;

/// Builds the vessel that reproduces `curve`: each segment of slope `m`
/// becomes a band of area `1 / m` (in the unit map's scale) spanning the
/// segment's frequency range.
///
/// The band under the curve's lowest frequency is extended down to the
/// vessel floor. Adjacent bands of equal area are merged, and a single band
/// becomes a uniform profile.
pub fn profile_from_droop_curve(curve: &DroopCurve, unit: &UnitMap) -> Result<AreaProfile, DroopError> {
    unit.check()?;
    let pts = curve.points();
    let floor = unit.level(pts[pts.len() - 1].1);
    if floor < 0.0 {
        return Err(DroopError::BelowFloor { level: floor });
    }
    // Walk from the lowest frequency (highest power) upwards.
    let mut bands: Vec<Segment> = Vec::new();
    for (i, m_p) in curve.slopes().into_iter().enumerate().rev() {
        if !m_p.is_finite() {
            return Err(DroopError::InfiniteSlope(i));
        }
        if m_p <= 0.0 {
            return Err(DroopError::ZeroSlope(i));
        }
        let area = unit.area_for_slope(m_p);
        let from = bands.last().map_or(0.0, |b| b.to);
        let to = unit.level(pts[i].1);
        match bands.last_mut() {
            Some(prev) if (prev.area - area).abs() <= SAME_AREA_RTOL * prev.area => prev.to = to,
            _ => bands.push(Segment { from, to, area }),
        }
    }
    if bands.len() == 1 {
        return Ok(AreaProfile::Uniform { area: bands[0].area });
    }
    Ok(AreaProfile::PiecewiseConstant { segments: bands })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const ID: UnitMap = UnitMap::IDENTITY;

    #[test]
    fn droop_law_examples() {
        let p = DroopParameters::new(60.0, 0.1, 0.0).unwrap();
        assert_eq!(droop_frequency(&p, 0.0), 60.0);
        let p = DroopParameters::new(60.0, 0.1, 5.0).unwrap();
        assert_eq!(droop_frequency(&p, 5.0), 60.0);
        let p = DroopParameters::new(60.0, 0.4, 0.0).unwrap();
        assert_relative_eq!(droop_frequency(&p, 1.0), 59.6, max_relative = 1e-15);
        assert!(DroopParameters::new(60.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn slope_selection() {
        assert_relative_eq!(droop_slope(1.0, 10.0).unwrap(), 0.1);
        assert_relative_eq!(droop_slope(0.5, 2.5).unwrap(), 0.2);
        assert!(droop_slope(0.0, 1.0).is_err());
        assert!(droop_slope(1.0, -2.0).is_err());
        let p = DroopParameters::from_rating(60.0, 1.0, 10.0, 0.0).unwrap();
        assert_eq!(p.s_rated, Some(10.0));
        assert_relative_eq!(p.m_p, 0.1);
    }

    #[test]
    fn slope_area_duality() {
        assert_relative_eq!(area_from_slope(0.4).unwrap(), 2.5, max_relative = 1e-15);
        assert_eq!(slope_from_area(1.0).unwrap(), 1.0);
        assert!(area_from_slope(0.0).is_err());
        assert!(slope_from_area(-1.0).is_err());
    }

    /// Quadrature + bisection oracle for the implicit curve, independent of
    /// the closed-form volume integral.
    fn quadrature_frequency(profile: &AreaProfile, f_nom: f64, power: f64) -> f64 {
        let integral = |f: f64| {
            let n = 20_000;
            let h = (f_nom - f) / n as f64;
            (0..n).map(|i| profile.area_at(f + (i as f64 + 0.5) * h) * h).sum::<f64>()
        };
        let (mut lo, mut hi) = (0.0, f_nom);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if integral(mid) > power {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn uniform_vessel_is_linear_droop() {
        let profile = AreaProfile::uniform(2.5);
        let oracle = quadrature_frequency(&profile, 60.0, 1.0);
        assert_relative_eq!(oracle, 59.6, max_relative = 1e-9);
        let f = frequency_from_profile(&profile, 120.0, 60.0, 0.0, &ID, 1.0).unwrap();
        assert_relative_eq!(f, 59.6, max_relative = 1e-12);
        let curve = droop_curve_from_profile(&profile, 120.0, 60.0, 0.0, &ID).unwrap();
        assert_eq!(curve.kind(), CurveKind::Linear);
        assert_relative_eq!(curve.frequency_at(1.0).unwrap(), 59.6, max_relative = 1e-12);
    }

    #[test]
    fn nominal_point_is_on_curve() {
        let profile = AreaProfile::Sampled {
            points: vec![(0.0, 1.0), (50.0, 3.0), (120.0, 5.0)],
        };
        assert_eq!(frequency_from_profile(&profile, 120.0, 60.0, 7.0, &ID, 7.0).unwrap(), 60.0);
        let curve = droop_curve_from_profile(&profile, 120.0, 60.0, 7.0, &ID).unwrap();
        assert!(curve.points().contains(&(7.0, 60.0)));
    }

    #[test]
    fn stepped_vessel_breaks_slope_at_area_break() {
        let profile = AreaProfile::stepped(&[(30.0, 2.0), (120.0, 4.0)]);
        let curve = droop_curve_from_profile(&profile, 120.0, 60.0, 0.0, &ID).unwrap();
        assert_eq!(curve.kind(), CurveKind::PiecewiseLinear);
        // Draining from 60 to 30 through area 4 delivers 120.
        assert!(curve.points().contains(&(120.0, 30.0)));
        let slope_above = (60.0 - curve.frequency_at(100.0).unwrap()) / 100.0;
        let slope_below = (30.0 - curve.frequency_at(140.0).unwrap()) / 20.0;
        assert_relative_eq!(slope_above, 0.25, max_relative = 1e-12);
        assert_relative_eq!(slope_below, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn beyond_capacity() {
        let profile = AreaProfile::uniform(1.0);
        assert!(matches!(
            frequency_from_profile(&profile, 120.0, 60.0, 0.0, &ID, 61.0),
            Err(DroopError::BeyondCapacity { .. })
        ));
        assert!(frequency_from_profile(&profile, 120.0, 60.0, 0.0, &ID, -60.0).is_ok());
        assert!(frequency_from_profile(&profile, 120.0, 60.0, 0.0, &ID, -61.0).is_err());
        assert!(matches!(
            frequency_from_profile(&profile, 50.0, 60.0, 0.0, &ID, 0.0),
            Err(DroopError::NominalOutOfRange { .. })
        ));
    }

    #[test]
    fn linear_curve_gives_uniform_vessel() {
        let curve = DroopCurve::new(vec![(0.0, 60.0), (10.0, 56.0)], CurveKind::Linear).unwrap();
        match profile_from_droop_curve(&curve, &ID).unwrap() {
            AreaProfile::Uniform { area } => assert_relative_eq!(area, 2.5, max_relative = 1e-12),
            other => panic!("expected uniform, got {other:?}"),
        }
    }

    #[test]
    fn piecewise_curve_gives_stepped_vessel() {
        // Slope 0.5 over P ∈ [0, 20], then 0.25 over [20, 60].
        let curve = DroopCurve::new(
            vec![(0.0, 60.0), (20.0, 50.0), (60.0, 40.0)],
            CurveKind::PiecewiseLinear,
        )
        .unwrap();
        let profile = profile_from_droop_curve(&curve, &ID).unwrap();
        let AreaProfile::PiecewiseConstant { segments } = &profile else {
            panic!("expected stepped profile");
        };
        assert_eq!(segments.len(), 2);
        // Lowest frequency band (40..50 Hz, slope 0.25) is widest, extended to the floor.
        assert_relative_eq!(segments[0].area, 4.0, max_relative = 1e-12);
        assert_eq!((segments[0].from, segments[0].to), (0.0, 50.0));
        assert_relative_eq!(segments[1].area, 2.0, max_relative = 1e-12);
        assert_eq!(segments[1].to, 60.0);

        let back = droop_curve_from_profile(&profile, 60.0, 60.0, 0.0, &ID).unwrap();
        for &(p, f) in curve.points() {
            assert!((back.frequency_at(p).unwrap() - f).abs() < 1e-6);
        }
    }

    #[test]
    fn degenerate_curves_rejected() {
        assert_eq!(
            DroopCurve::new(vec![(0.0, 60.0), (1.0, 60.0)], CurveKind::Linear),
            Err(DroopError::ZeroSlope(0))
        );
        assert_eq!(
            DroopCurve::new(vec![(0.0, 60.0), (0.0, 59.0)], CurveKind::Linear),
            Err(DroopError::InfiniteSlope(0))
        );
        assert_eq!(
            DroopCurve::new(vec![(0.0, 60.0), (1.0, 61.0)], CurveKind::Linear),
            Err(DroopError::NotDecreasing(0))
        );
        assert_eq!(DroopCurve::new(vec![(0.0, 60.0)], CurveKind::Linear), Err(DroopError::TooFewPoints(1)));
        let below = DroopCurve::new(vec![(0.0, 10.0), (100.0, -5.0)], CurveKind::Linear).unwrap();
        assert!(matches!(
            profile_from_droop_curve(&below, &ID),
            Err(DroopError::BelowFloor { .. })
        ));
    }

    #[test]
    fn non_identity_unit_map() {
        // 1 cm ↔ 10 mHz around 60 Hz, 1 cm³ ↔ 100 W.
        let unit = UnitMap {
            hz_per_cm: 0.01,
            hz_offset: 59.4,
            watts_per_cm3: 100.0,
        };
        assert_relative_eq!(unit.frequency(60.0), 60.0, max_relative = 1e-15);
        let profile = AreaProfile::uniform(2.5);
        let m_p = unit.slope_for_area(2.5);
        let params = DroopParameters::new(60.0, m_p, 0.0).unwrap();
        let f = frequency_from_profile(&profile, 120.0, 60.0, 0.0, &unit, 1000.0).unwrap();
        assert_relative_eq!(f, droop_frequency(&params, 1000.0), max_relative = 1e-12);
        assert_relative_eq!(unit.area_for_slope(m_p), 2.5, max_relative = 1e-12);
        let bad = UnitMap {
            hz_per_cm: 0.0,
            ..UnitMap::IDENTITY
        };
        assert!(bad.check().is_err());
    }

    fn arb_stepped() -> impl Strategy<Value = AreaProfile> {
        prop::collection::vec((2.0f64..30.0, 0.2f64..8.0), 1..6).prop_map(|steps| {
            let mut top = 0.0;
            let mut prev = f64::NAN;
            let tops: Vec<_> = steps
                .into_iter()
                .map(|(dh, a)| {
                    top += dh;
                    // Keep neighbours distinct so bands do not merge.
                    let a = if (a - prev).abs() < 1e-3 { a + 0.5 } else { a };
                    prev = a;
                    (top, a)
                })
                .collect();
            AreaProfile::stepped(&tops)
        })
    }

    proptest! {
        #[test]
        fn slope_area_round_trip(x in 1e-3f64..1e3) {
            let back = area_from_slope(slope_from_area(x).unwrap()).unwrap();
            prop_assert!((back - x).abs() <= 1e-12 * x);
            prop_assert!((droop_slope(x, 1.0 / x + 1.0).unwrap() * (1.0 / x + 1.0) - x).abs() <= 1e-12 * x);
        }

        #[test]
        fn curve_is_strictly_decreasing(p in arb_stepped(), frac in 0.0f64..1.0) {
            let top = p.extent().unwrap();
            let f_nom = frac * top;
            let curve = droop_curve_from_profile(&p, top, f_nom, 0.0, &ID).unwrap();
            for w in curve.points().windows(2) {
                prop_assert!(w[1].0 > w[0].0 && w[1].1 < w[0].1);
            }
        }

        #[test]
        fn profile_curve_profile_round_trip(p in arb_stepped(), frac in 0.0f64..1.0) {
            let top = p.extent().unwrap();
            let curve = droop_curve_from_profile(&p, top, frac * top, 3.0, &ID).unwrap();
            let back = profile_from_droop_curve(&curve, &ID).unwrap();
            let (AreaProfile::PiecewiseConstant { segments: a }, AreaProfile::PiecewiseConstant { segments: b }) = (&p, &back) else {
                // A single band comes back uniform.
                prop_assert_eq!(p.breakpoints().len(), 2);
                prop_assert!((back.area_at(0.0) - p.area_at(0.0)).abs() <= 1e-6);
                return Ok(());
            };
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(b) {
                prop_assert!((x.area - y.area).abs() <= 1e-6);
                prop_assert!((x.to - y.to).abs() <= 1e-6);
            }
        }
    }
}
