//! Plain-text summaries printed by the subcommands.

use std::fmt::Write as _;

use droopvessel::equilibrium::EquilibriumResult;
use droopvessel::{Network, TimeSeries, UnitMap};

/// Six-decimal rendering without a sign on values that round to zero.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Per-component settled level and per-vessel volumes.
pub fn equilibrium_summary(net: &Network, result: &EquilibriumResult, unit: &UnitMap) -> String {
    let mut out = String::new();
    for (i, c) in result.components.iter().enumerate() {
        let _ = write!(
            out,
            "component {} [{}]: L* = {:.6} cm ({:.6} Hz)",
            i + 1,
            c.nodes.join(", "),
            c.level,
            unit.frequency(c.level)
        );
        out.push_str(if c.has_tank { ", held by tank\n" } else { "\n" });
        if c.vessels.is_empty() {
            continue;
        }
        let _ = writeln!(
            out,
            "  {:<12} {:>10} {:>12} {:>12} {:>14} {:>14}",
            "vessel", "area cm2", "dV cm3", "exited cm3", "P_out W", "track err cm3"
        );
        for v in &c.vessels {
            let area = net.vessels()[v.index].profile.uniform_area();
            let _ = writeln!(
                out,
                "  {:<12} {:>10} {:>12} {:>12} {:>14} {:>14}",
                v.id,
                area.map_or("shaped".into(), |a| format!("{a:.4}")),
                num(v.volume_change),
                num(v.exited_volume),
                num(unit.power(v.exited_volume)),
                v.tracking_error.map_or("-".into(), num),
            );
        }
    }
    out
}

/// Absolute levels just before each scripted event and at the end of the run.
pub fn level_timeline(series: &TimeSeries) -> String {
    let mut times: Vec<(String, f64)> = Vec::new();
    let mut last_event = f64::NEG_INFINITY;
    for m in &series.markers {
        if m.time > last_event {
            last_event = m.time;
            times.push((format!("before t={}", m.time), m.time - series.sample_interval));
        }
    }
    times.push((format!("end t={}", series.last().t), series.last().t));

    let mut out = String::new();
    let _ = write!(out, "  {:<16}", "levels cm");
    for id in &series.node_ids {
        let _ = write!(out, " {id:>12}");
    }
    out.push('\n');
    for (label, t) in times {
        let s = series.at(t.max(0.0));
        let _ = write!(out, "  {label:<16}");
        for l in &s.levels {
            let _ = write!(out, " {:>12}", num(*l));
        }
        out.push('\n');
    }
    out
}

/// How the level change since t = 0 was shared among the straight vessels
/// of each tankless component, as `A·ΔL` normalized to the component area.
pub fn sharing_summary(net: &Network, result: &EquilibriumResult, series: &TimeSeries) -> String {
    let first = &series.samples[0];
    let last = series.last();
    let mut out = String::new();
    for c in result.components.iter().filter(|c| !c.has_tank && c.vessels.len() > 1) {
        let Some(areas) = c
            .vessels
            .iter()
            .map(|v| net.vessels()[v.index].profile.uniform_area())
            .collect::<Option<Vec<f64>>>()
        else {
            continue;
        };
        let absorbed: Vec<f64> = c
            .vessels
            .iter()
            .zip(&areas)
            .map(|(v, a)| a * (last.levels[v.index] - first.levels[v.index]))
            .collect();
        let total: f64 = absorbed.iter().sum();
        if total.abs() < 1e-9 {
            continue;
        }
        let scale = areas.iter().sum::<f64>() / total;
        let ratio: Vec<String> = absorbed.iter().map(|x| format!("{:.4}", x * scale)).collect();
        let ids: Vec<&str> = c.vessels.iter().map(|v| v.id.as_str()).collect();
        let _ = writeln!(out, "  sharing ratio {} = {}", ids.join(":"), ratio.join(" : "));
    }
    out
}
