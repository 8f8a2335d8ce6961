//! Vessel cross-section profiles and the volume/level conversions they induce.
//!
//! A profile gives the cross-sectional area `A(h)` at height `h` above the
//! vessel floor. The stored volume at level `h` is `V(h) = ∫₀ʰ A(u) du`.
//! Under the droop correspondence the area is the reciprocal of the droop
//! slope, so a non-uniform profile is a non-linear droop characteristic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("level {level} cm is outside the profile range [0, {max}]")]
    LevelOutOfRange { level: f64, max: f64 },
    #[error("volume {volume} cm³ is outside the profile range [0, {max}]")]
    VolumeOutOfRange { volume: f64, max: f64 },
}

/// One constant-area band of a [`AreaProfile::PiecewiseConstant`] profile,
/// covering heights `[from, to)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: f64,
    pub to: f64,
    pub area: f64,
}

/// Cross-sectional area of a vessel as a function of height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AreaProfile {
    /// Straight-walled vessel. Unbounded in height; the owning vessel's
    /// `max_height` caps it.
    Uniform { area: f64 },
    /// Stacked bands of constant area. Must start at 0 and be contiguous.
    #[serde(rename = "piecewise")]
    PiecewiseConstant { segments: Vec<Segment> },
    /// `(height, area)` samples with the area linearly interpolated between
    /// them. Volume is the exact integral of the interpolant.
    Sampled { points: Vec<(f64, f64)> },
}

impl AreaProfile {
    pub fn uniform(area: f64) -> Self {
        AreaProfile::Uniform { area }
    }

    /// Builds a stepped profile from `(top height, area)` pairs, bottom-up.
    pub fn stepped(steps: &[(f64, f64)]) -> Self {
        let mut from = 0.0;
        let segments = steps
            .iter()
            .map(|&(to, area)| {
                let s = Segment { from, to, area };
                from = to;
                s
            })
            .collect();
        AreaProfile::PiecewiseConstant { segments }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, AreaProfile::Uniform { .. })
    }

    /// Area of a uniform profile.
    pub fn uniform_area(&self) -> Option<f64> {
        match self {
            AreaProfile::Uniform { area } => Some(*area),
            _ => None,
        }
    }

    /// Highest height the profile describes; `None` for uniform profiles.
    pub fn extent(&self) -> Option<f64> {
        match self {
            AreaProfile::Uniform { .. } => None,
            AreaProfile::PiecewiseConstant { segments } => segments.last().map(|s| s.to),
            AreaProfile::Sampled { points } => points.last().map(|p| p.0),
        }
    }

    /// Heights where the area changes slope or value, including 0 and the top.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            AreaProfile::Uniform { .. } => vec![0.0],
            AreaProfile::PiecewiseConstant { segments } => {
                let mut out = vec![0.0];
                out.extend(segments.iter().map(|s| s.to));
                out
            }
            AreaProfile::Sampled { points } => points.iter().map(|p| p.0).collect(),
        }
    }

    /// Area at height `h`. Band boundaries belong to the upper band; heights
    /// outside the described range take the nearest end value.
    pub fn area_at(&self, h: f64) -> f64 {
        match self {
            AreaProfile::Uniform { area } => *area,
            AreaProfile::PiecewiseConstant { segments } => segments
                .iter()
                .find(|s| h < s.to)
                .or(segments.last())
                .map_or(0.0, |s| s.area),
            AreaProfile::Sampled { points } => {
                let (first, last) = (points[0], points[points.len() - 1]);
                if h <= first.0 {
                    return first.1;
                }
                if h >= last.0 {
                    return last.1;
                }
                let i = points.partition_point(|p| p.0 <= h) - 1;
                let (h0, a0) = points[i];
                let (h1, a1) = points[i + 1];
                a0 + (a1 - a0) * (h - h0) / (h1 - h0)
            }
        }
    }

    /// Checks the profile's own invariants, returning one message per broken rule.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        let bad_area = |a: f64| !(a.is_finite() && a > 0.0);
        match self {
            AreaProfile::Uniform { area } => {
                if bad_area(*area) {
                    out.push(format!("area must be > 0 (got {area})"));
                }
            }
            AreaProfile::PiecewiseConstant { segments } => {
                if segments.is_empty() {
                    out.push("piecewise profile needs at least one segment".into());
                }
                let mut expected_from = 0.0;
                for (i, s) in segments.iter().enumerate() {
                    if bad_area(s.area) {
                        out.push(format!("segment {i}: area must be > 0 (got {})", s.area));
                    }
                    if s.from != expected_from {
                        out.push(format!(
                            "segment {i}: starts at {} but previous coverage ends at {expected_from}",
                            s.from
                        ));
                    }
                    if !(s.to.is_finite() && s.to > s.from) {
                        out.push(format!("segment {i}: empty or inverted interval [{}, {})", s.from, s.to));
                    }
                    expected_from = s.to;
                }
            }
            AreaProfile::Sampled { points } => {
                if points.len() < 2 {
                    out.push(format!("sampled profile needs at least 2 points (got {})", points.len()));
                }
                if let Some(first) = points.first() {
                    if first.0 != 0.0 {
                        out.push(format!("first sample must be at height 0 (got {})", first.0));
                    }
                }
                for (i, &(h, a)) in points.iter().enumerate() {
                    if bad_area(a) {
                        out.push(format!("point {i}: area must be > 0 (got {a})"));
                    }
                    if !h.is_finite() {
                        out.push(format!("point {i}: height is not finite"));
                    }
                }
                for (i, w) in points.windows(2).enumerate() {
                    if w[1].0 <= w[0].0 {
                        out.push(format!(
                            "points {i} and {}: heights must be strictly increasing",
                            i + 1
                        ));
                    }
                }
            }
        }
        out
    }

    /// `∫₀ʰ A(u) du`, extended linearly with the end areas outside the
    /// described range. Only meaningful for an already-validated profile.
    pub(crate) fn volume_extended(&self, h: f64) -> f64 {
        match self {
            AreaProfile::Uniform { area } => area * h,
            AreaProfile::PiecewiseConstant { segments } => {
                if h <= 0.0 {
                    return segments[0].area * h;
                }
                let mut v = 0.0;
                for s in segments {
                    if h <= s.from {
                        return v;
                    }
                    v += s.area * (h.min(s.to) - s.from);
                }
                let last = segments[segments.len() - 1];
                if h > last.to {
                    v += last.area * (h - last.to);
                }
                v
            }
            AreaProfile::Sampled { points } => {
                if h <= 0.0 {
                    return points[0].1 * h;
                }
                let mut v = 0.0;
                for w in points.windows(2) {
                    let ((h0, a0), (h1, a1)) = (w[0], w[1]);
                    if h <= h0 {
                        return v;
                    }
                    let d = h.min(h1) - h0;
                    v += a0 * d + 0.5 * (a1 - a0) / (h1 - h0) * d * d;
                }
                let (top, a_top) = points[points.len() - 1];
                if h > top {
                    v += a_top * (h - top);
                }
                v
            }
        }
    }

    /// Inverse of [`volume_extended`](Self::volume_extended).
    pub(crate) fn level_extended(&self, volume: f64) -> f64 {
        if let AreaProfile::Uniform { area } = self {
            return volume / area;
        }
        let breaks = self.breakpoints();
        let top = breaks[breaks.len() - 1];
        if volume <= 0.0 {
            return volume / self.area_at(0.0);
        }
        let v_top = self.volume_extended(top);
        if volume >= v_top {
            return top + (volume - v_top) / self.area_at(top);
        }
        // Bracket inside a single piece, then bisect to full precision.
        let mut lo = 0.0;
        let mut hi = top;
        for &b in &breaks[1..] {
            if self.volume_extended(b) >= volume {
                hi = b;
                break;
            }
            lo = b;
        }
        bisect_increasing(|h| self.volume_extended(h), volume, lo, hi)
    }
}

/// Solves `f(x) = target` for non-decreasing `f` on `[lo, hi]` by bisection
/// until the bracket cannot shrink further in `f64`.
pub(crate) fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever end lands closer.
    if (f(lo) - target).abs() <= (f(hi) - target).abs() {
        lo
    } else {
        hi
    }
}

/// Stored volume at `level`: exact for uniform and piecewise profiles,
/// trapezoidal (exact for the linear interpolant) for sampled ones.
pub fn volume_from_level(profile: &AreaProfile, level: f64) -> Result<f64, ProfileError> {
    let max = profile.extent().unwrap_or(f64::INFINITY);
    if !(0.0..=max).contains(&level) {
        return Err(ProfileError::LevelOutOfRange { level, max });
    }
    Ok(profile.volume_extended(level))
}

/// Level holding `volume`. Closed form for uniform profiles, monotone
/// bisection otherwise.
pub fn level_from_volume(profile: &AreaProfile, volume: f64) -> Result<f64, ProfileError> {
    let max = profile
        .extent()
        .map_or(f64::INFINITY, |top| profile.volume_extended(top));
    if !(0.0..=max).contains(&volume) {
        return Err(ProfileError::VolumeOutOfRange { volume, max });
    }
    if volume == 0.0 {
        return Ok(0.0);
    }
    Ok(profile.level_extended(volume))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_step() -> AreaProfile {
        AreaProfile::stepped(&[(30.0, 2.0), (60.0, 4.0)])
    }

    /// Midpoint Riemann sum, independent of the closed-form integration.
    fn riemann(profile: &AreaProfile, level: f64, step: f64) -> f64 {
        let n = (level / step).round() as usize;
        (0..n).map(|i| profile.area_at((i as f64 + 0.5) * step) * step).sum()
    }

    #[test]
    fn uniform_rectangle() {
        let p = AreaProfile::uniform(2.5);
        assert_eq!(volume_from_level(&p, 60.0).unwrap(), 150.0);
        assert_eq!(volume_from_level(&p, 0.0).unwrap(), 0.0);
        assert_eq!(level_from_volume(&p, 150.0).unwrap(), 60.0);
        assert_eq!(level_from_volume(&p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn piecewise_matches_riemann_sum() {
        let p = two_step();
        let oracle = riemann(&p, 45.0, 1e-4);
        assert_relative_eq!(oracle, 120.0, max_relative = 1e-9);
        assert_eq!(volume_from_level(&p, 45.0).unwrap(), 120.0);
    }

    #[test]
    fn sampled_matches_riemann_sum() {
        let p = AreaProfile::Sampled {
            points: vec![(0.0, 1.0), (40.0, 3.0), (100.0, 2.0)],
        };
        for level in [10.0, 40.0, 77.7] {
            let oracle = riemann(&p, level, 1e-4);
            assert_relative_eq!(volume_from_level(&p, level).unwrap(), oracle, max_relative = 1e-7);
        }
    }

    #[test]
    fn out_of_range_errors() {
        let p = two_step();
        assert!(matches!(
            volume_from_level(&p, 61.0),
            Err(ProfileError::LevelOutOfRange { .. })
        ));
        assert!(volume_from_level(&p, -0.1).is_err());
        assert!(matches!(
            level_from_volume(&p, 181.0),
            Err(ProfileError::VolumeOutOfRange { .. })
        ));
        assert!(level_from_volume(&AreaProfile::uniform(1.0), -1.0).is_err());
    }

    #[test]
    fn boundary_belongs_to_upper_band() {
        let p = two_step();
        assert_eq!(p.area_at(30.0), 4.0);
        assert_eq!(p.area_at(29.999), 2.0);
        assert_eq!(p.area_at(60.0), 4.0);
    }

    #[test]
    fn check_flags_gaps_and_bad_areas() {
        let gap = AreaProfile::PiecewiseConstant {
            segments: vec![
                Segment { from: 0.0, to: 10.0, area: 1.0 },
                Segment { from: 12.0, to: 20.0, area: 1.0 },
            ],
        };
        assert_eq!(gap.check().len(), 1);
        assert_eq!(AreaProfile::uniform(0.0).check().len(), 1);
        let unsorted = AreaProfile::Sampled {
            points: vec![(0.0, 1.0), (5.0, 1.0), (5.0, 2.0)],
        };
        assert_eq!(unsorted.check().len(), 1);
        assert!(!AreaProfile::Sampled { points: vec![(0.0, 1.0)] }.check().is_empty());
        assert!(two_step().check().is_empty());
    }

    #[test]
    fn serde_shape() {
        let json = serde_json::to_value(AreaProfile::uniform(2.5)).unwrap();
        assert_eq!(json, serde_json::json!({"kind": "uniform", "area": 2.5}));
        let p: AreaProfile = serde_json::from_value(serde_json::json!({
            "kind": "piecewise",
            "segments": [{"from": 0, "to": 30, "area": 2}, {"from": 30, "to": 60, "area": 4}]
        }))
        .unwrap();
        assert_eq!(p, two_step());
        let s: AreaProfile =
            serde_json::from_value(serde_json::json!({"kind": "sampled", "points": [[0, 1], [10, 2]]}))
                .unwrap();
        assert_eq!(s.extent(), Some(10.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_profile() -> impl Strategy<Value = AreaProfile> {
            prop_oneof![
                (0.1f64..10.0).prop_map(AreaProfile::uniform),
                prop::collection::vec((1.0f64..40.0, 0.1f64..10.0), 1..6).prop_map(|steps| {
                    let mut top = 0.0;
                    let tops: Vec<_> = steps
                        .into_iter()
                        .map(|(dh, a)| {
                            top += dh;
                            (top, a)
                        })
                        .collect();
                    AreaProfile::stepped(&tops)
                }),
                prop::collection::vec((1.0f64..40.0, 0.1f64..10.0), 2..6).prop_map(|pts| {
                    let mut h = 0.0;
                    let points = pts
                        .into_iter()
                        .enumerate()
                        .map(|(i, (dh, a))| {
                            if i > 0 {
                                h += dh;
                            }
                            (h, a)
                        })
                        .collect();
                    AreaProfile::Sampled { points }
                }),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn level_volume_round_trip(p in arb_profile(), frac in 0.0f64..=1.0) {
                let top = p.extent().unwrap_or(120.0);
                let level = frac * top;
                let v = volume_from_level(&p, level).unwrap();
                let back = level_from_volume(&p, v).unwrap();
                prop_assert!((back - level).abs() <= 1e-9 * top.max(1.0));
                let again = volume_from_level(&p, back).unwrap();
                prop_assert!((again - v).abs() <= 1e-9 * v.max(1e-12));
            }

            #[test]
            fn volume_strictly_increasing(p in arb_profile(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
                prop_assume!((a - b).abs() > 1e-6);
                let top = p.extent().unwrap_or(120.0);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                prop_assert!(
                    volume_from_level(&p, lo * top).unwrap() < volume_from_level(&p, hi * top).unwrap()
                );
            }
        }
    }
}
