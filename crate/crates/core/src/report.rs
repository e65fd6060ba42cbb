//! Aggregation of result rows into fraction curves, group drops, runtime
//! ratios and SVG charts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::stable_sum;
use crate::green::{estimate_co2_savings, EnergyParams};
use crate::models::spec::AlgorithmKind;
use crate::runner::ExperimentRecord;
use crate::split::DownsampleLevel;

/// Algorithms grouped by how steeply they degrade with less data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMap {
    pub group1: Vec<AlgorithmKind>,
    pub group2: Vec<AlgorithmKind>,
}

impl Default for GroupMap {
    fn default() -> Self {
        use AlgorithmKind::*;
        GroupMap {
            group1: vec![UserKnn, Svd, ItemKnn, ItemKnnBinary, Nmf],
            group2: vec![Bias, Popularity, PopularityBinary, FunkSvd, BiasedMf],
        }
    }
}

impl GroupMap {
    pub fn groups(&self) -> [(&'static str, &[AlgorithmKind]); 2] {
        [("group1", &self.group1), ("group2", &self.group2)]
    }

    pub fn group_of(&self, kind: AlgorithmKind) -> Option<&'static str> {
        self.groups()
            .into_iter()
            .find(|(_, members)| members.contains(&kind))
            .map(|(name, _)| name)
    }

    /// Same map with members outside `present` removed.
    pub fn restricted_to(&self, present: &[AlgorithmKind]) -> GroupMap {
        let keep = |g: &[AlgorithmKind]| g.iter().copied().filter(|k| present.contains(k)).collect();
        GroupMap {
            group1: keep(&self.group1),
            group2: keep(&self.group2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(k) = self.group1.iter().find(|k| self.group2.contains(k)) {
            return Err(Error::invalid(format!("{k} is in both groups")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub fraction: DownsampleLevel,
    pub mean: f64,
    /// Population standard deviation over seeds.
    pub std: f64,
    /// `mean / mean at fraction 1.0`
    pub relative: f64,
    pub n: usize,
    /// Raw per-seed values, ordered by seed.
    #[serde(skip)]
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub dataset: String,
    pub algorithm: AlgorithmKind,
    /// Ascending fraction.
    pub points: Vec<CurvePoint>,
}

impl Curve {
    pub fn at(&self, fraction: DownsampleLevel) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.fraction.label() == fraction.label())
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = stable_sum(values.iter().copied()) / n;
    let var = stable_sum(values.iter().map(|v| (v - mean).powi(2))) / n;
    (mean, var.sqrt())
}

/// Successful rows keyed by dataset, algorithm and fraction label, with
/// values sorted by (seed, fingerprint) so aggregation ignores row order.
type Buckets<'a> = BTreeMap<(String, AlgorithmKind), BTreeMap<String, Vec<&'a ExperimentRecord>>>;

fn bucket(records: &[ExperimentRecord]) -> Buckets<'_> {
    let mut out: Buckets = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        out.entry((r.dataset.clone(), r.algorithm))
            .or_default()
            .entry(r.fraction.label())
            .or_default()
            .push(r);
    }
    for fractions in out.values_mut() {
        for rows in fractions.values_mut() {
            rows.sort_by(|a, b| a.seed.cmp(&b.seed).then_with(|| a.params_fingerprint.cmp(&b.params_fingerprint)));
        }
    }
    out
}

const FULL_LABEL: &str = "1.00";

/// Mean, population std and relative value per algorithm and fraction.
/// Failed rows are ignored.
pub fn build_curves(records: &[ExperimentRecord]) -> Result<Vec<Curve>> {
    let mut curves = Vec::new();
    for ((dataset, algorithm), fractions) in bucket(records) {
        let Some(full) = fractions.get(FULL_LABEL) else {
            return Err(Error::invalid(format!(
                "{algorithm} on {dataset} has no fraction-1.0 result to normalize against"
            )));
        };
        let full_seeds: Vec<u64> = full.iter().map(|r| r.seed).collect();
        for rows in fractions.values() {
            if let Some(r) = rows.iter().find(|r| !full_seeds.contains(&r.seed)) {
                return Err(Error::invalid(format!(
                    "{algorithm} on {dataset} has no fraction-1.0 result for seed {}",
                    r.seed
                )));
            }
        }
        let values = |rows: &[&ExperimentRecord]| -> Vec<f64> { rows.iter().filter_map(|r| r.ndcg_mean).collect() };
        let (full_mean, _) = mean_std(&values(full));
        let mut points: Vec<CurvePoint> = fractions
            .iter()
            .map(|(label, rows)| {
                let vals = values(rows);
                let (mean, std) = mean_std(&vals);
                let relative = if label == FULL_LABEL { 1.0 } else { mean / full_mean };
                CurvePoint {
                    fraction: rows[0].fraction,
                    mean,
                    std,
                    relative,
                    n: vals.len(),
                    values: vals,
                }
            })
            .collect();
        points.sort_by(|a, b| a.fraction.fraction().total_cmp(&b.fraction.fraction()));
        curves.push(Curve {
            dataset,
            algorithm,
            points,
        });
    }
    Ok(curves)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDrop {
    pub dataset: String,
    pub group: String,
    pub fraction: DownsampleLevel,
    /// `100 * (1 - mean relative value of the members)`
    pub drop_pct: f64,
}

/// Mean relative drop per group at each requested fraction, per dataset in
/// `curves`. Every group member must have a curve with that fraction.
pub fn group_summary(curves: &[Curve], groups: &GroupMap, at_fractions: &[DownsampleLevel]) -> Result<Vec<GroupDrop>> {
    groups.validate()?;
    let mut datasets: Vec<&str> = curves.iter().map(|c| c.dataset.as_str()).collect();
    datasets.sort_unstable();
    datasets.dedup();
    let mut out = Vec::new();
    for dataset in datasets {
        for (name, members) in groups.groups() {
            if members.is_empty() {
                continue;
            }
            for &fraction in at_fractions {
                let mut rel = Vec::with_capacity(members.len());
                for &kind in members {
                    let point = curves
                        .iter()
                        .find(|c| c.dataset == dataset && c.algorithm == kind)
                        .ok_or_else(|| Error::invalid(format!("{name} member {kind} has no curve for {dataset}")))?
                        .at(fraction)
                        .ok_or_else(|| {
                            Error::invalid(format!("{name} member {kind} has no point at {} for {dataset}", fraction.label()))
                        })?;
                    rel.push(point.relative);
                }
                let mean = stable_sum(rel.iter().copied()) / rel.len() as f64;
                out.push(GroupDrop {
                    dataset: dataset.to_string(),
                    group: name.to_string(),
                    fraction,
                    drop_pct: 100.0 * (1.0 - mean),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRatio {
    pub dataset: String,
    /// `None` for the per-dataset mean over algorithms.
    pub algorithm: Option<AlgorithmKind>,
    pub fraction: DownsampleLevel,
    /// Mean (fit + eval) seconds at the fraction over the same at 1.0.
    pub ratio: f64,
}

/// Runtime ratios per algorithm, plus an unweighted mean over algorithms
/// for each dataset and fraction.
pub fn runtime_ratios(records: &[ExperimentRecord]) -> Result<Vec<RuntimeRatio>> {
    let mut out = Vec::new();
    let mut by_dataset: BTreeMap<(String, String), (DownsampleLevel, Vec<f64>)> = BTreeMap::new();
    for ((dataset, algorithm), fractions) in bucket(records) {
        let Some(full) = fractions.get(FULL_LABEL) else {
            return Err(Error::invalid(format!("{algorithm} on {dataset} has no fraction-1.0 runtime")));
        };
        let total = |rows: &[&ExperimentRecord]| stable_sum(rows.iter().map(|r| r.total_seconds())) / rows.len() as f64;
        let full_total = total(full);
        let mut rows: Vec<RuntimeRatio> = fractions
            .iter()
            .map(|(label, rows)| RuntimeRatio {
                dataset: dataset.clone(),
                algorithm: Some(algorithm),
                fraction: rows[0].fraction,
                ratio: if label == FULL_LABEL { 1.0 } else { total(rows) / full_total },
            })
            .collect();
        rows.sort_by(|a, b| a.fraction.fraction().total_cmp(&b.fraction.fraction()));
        for r in &rows {
            by_dataset
                .entry((dataset.clone(), r.fraction.label()))
                .or_insert_with(|| (r.fraction, Vec::new()))
                .1
                .push(r.ratio);
        }
        out.extend(rows);
    }
    let mut means: Vec<RuntimeRatio> = by_dataset
        .into_iter()
        .map(|((dataset, label), (fraction, ratios))| RuntimeRatio {
            dataset,
            algorithm: None,
            fraction,
            ratio: if label == FULL_LABEL {
                1.0
            } else {
                stable_sum(ratios.iter().copied()) / ratios.len() as f64
            },
        })
        .collect();
    means.sort_by(|a, b| a.dataset.cmp(&b.dataset).then(a.fraction.fraction().total_cmp(&b.fraction.fraction())));
    out.extend(means);
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn curves_csv(curves: &[Curve]) -> String {
    let mut s = String::from("dataset,algorithm,fraction,mean,std,relative,n\n");
    for c in curves {
        for p in &c.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                c.dataset,
                c.algorithm,
                p.fraction.label(),
                p.mean,
                p.std,
                p.relative,
                p.n
            );
        }
    }
    s
}

fn groups_csv(drops: &[GroupDrop]) -> String {
    let mut s = String::from("dataset,group,fraction,drop_pct\n");
    for d in drops {
        let _ = writeln!(s, "{},{},{},{}", d.dataset, d.group, d.fraction.label(), d.drop_pct);
    }
    s
}

fn runtime_csv(ratios: &[RuntimeRatio], params: &EnergyParams) -> String {
    let mut s = String::from("dataset,algorithm,fraction,ratio,savings_gco2e\n");
    for r in ratios {
        let name = r.algorithm.map(|a| a.name()).unwrap_or("mean");
        let savings = estimate_co2_savings(r.ratio.min(1.0), params)
            .map(|g| g.to_string())
            .unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{}", r.dataset, name, r.fraction.label(), r.ratio, savings);
    }
    s
}

const README: &str = "\
curves.csv          per dataset, algorithm and fraction: mean nDCG over seeds, population std over seeds,\n\
                    relative = mean / mean at fraction 1.00, n = number of seeds\n\
groups.csv          drop_pct = 100 * (1 - mean relative value of the group's members)\n\
runtime_ratios.csv  ratio = mean (fit + eval) seconds at the fraction / same at 1.00;\n\
                    algorithm 'mean' is the unweighted mean over algorithms;\n\
                    savings_gco2e = (1 - ratio) * kwh_per_run * n_configs * intensity * overhead_factor (defaults)\n\
<dataset>_curves.svg          relative nDCG vs fraction, one polyline per algorithm\n\
<dataset>_curves_abs.svg      absolute mean nDCG vs fraction\n\
<dataset>_groups_50v100.svg   per-group box plots of per-seed nDCG at 0.50 and 1.00\n";

/// Writes every report artifact into `out_dir` and returns the paths written.
/// Group members missing from the records are left out of the summaries.
pub fn emit_report(records: &[ExperimentRecord], groups: &GroupMap, out_dir: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::invalid("no experiment records to report on"));
    }
    let curves = build_curves(records)?;
    if curves.is_empty() {
        return Err(Error::invalid("no successful experiment records to report on"));
    }
    let ratios = runtime_ratios(records)?;

    let mut drops = Vec::new();
    let mut datasets: Vec<String> = curves.iter().map(|c| c.dataset.clone()).collect();
    datasets.dedup();
    for dataset in &datasets {
        let mine: Vec<Curve> = curves.iter().filter(|c| &c.dataset == dataset).cloned().collect();
        let present: Vec<AlgorithmKind> = mine.iter().map(|c| c.algorithm).collect();
        // only fractions every present group member reached
        let mut fractions: Vec<DownsampleLevel> = mine.iter().flat_map(|c| c.points.iter().map(|p| p.fraction)).collect();
        fractions.sort_by(|a, b| a.fraction().total_cmp(&b.fraction()));
        fractions.dedup_by(|a, b| a.label() == b.label());
        let local = groups.restricted_to(&present);
        let members: Vec<&Curve> = mine.iter().filter(|c| local.group_of(c.algorithm).is_some()).collect();
        fractions.retain(|&f| members.iter().all(|c| c.at(f).is_some()));
        drops.extend(group_summary(&mine, &local, &fractions)?);
    }

    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    let mut put = |name: String, text: String| -> Result<()> {
        let path = out_dir.join(name);
        write_file(&path, &text)?;
        written.push(path);
        Ok(())
    };
    put("curves.csv".into(), curves_csv(&curves))?;
    put("groups.csv".into(), groups_csv(&drops))?;
    put("runtime_ratios.csv".into(), runtime_csv(&ratios, &EnergyParams::default()))?;
    put("README.txt".into(), README.to_string())?;
    for dataset in &datasets {
        let mine: Vec<&Curve> = curves.iter().filter(|c| &c.dataset == dataset).collect();
        let stem = file_stem(dataset);
        put(format!("{stem}_curves.svg"), svg_curves(dataset, &mine, |p| p.relative, "relative nDCG@10"))?;
        put(format!("{stem}_curves_abs.svg"), svg_curves(dataset, &mine, |p| p.mean, "mean nDCG@10"))?;
        if let Some(svg) = svg_groups(dataset, &mine, groups) {
            put(format!("{stem}_groups_50v100.svg"), svg)?;
        }
    }
    Ok(written)
}

fn file_stem(dataset: &str) -> String {
    dataset
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect()
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const PALETTE: [&str; 11] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#000000",
];

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

struct Frame {
    y_max: f64,
}

impl Frame {
    fn x(&self, frac: f64) -> f64 {
        LEFT + frac * (W - LEFT - RIGHT)
    }
    fn y(&self, v: f64) -> f64 {
        let v = if v.is_finite() { v.clamp(0.0, self.y_max) } else { 0.0 };
        H - BOTTOM - v / self.y_max * (H - TOP - BOTTOM)
    }
    fn axes(&self, s: &mut String, title: &str, x_label: &str, y_label: &str) {
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<title>{}</title>"#, xml_escape(title));
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, xml_escape(title));
        let (x0, x1, y0, y1) = (self.x(0.0), self.x(1.0), self.y(0.0), self.y(self.y_max));
        let _ = writeln!(s, r#"<g class="axes" stroke="black" fill="none"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"#);
        for i in 0..=5 {
            let v = self.y_max * i as f64 / 5.0;
            let y = self.y(v);
            let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{:.2}</text>"#, x0 - 6.0, y + 4.0, v);
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 12.0, xml_escape(x_label));
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            xml_escape(y_label)
        );
    }
}

/// Line chart with one `<polyline class="curve">` per algorithm.
fn svg_curves(dataset: &str, curves: &[&Curve], value: impl Fn(&CurvePoint) -> f64, y_label: &str) -> String {
    let top = curves
        .iter()
        .flat_map(|c| c.points.iter().map(&value))
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let frame = Frame {
        y_max: if top > 0.0 { top * 1.1 } else { 1.0 },
    };
    let mut s = String::new();
    frame.axes(&mut s, &format!("{dataset}: {y_label} vs training fraction"), "fraction of training data", y_label);
    for p in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{p:.1}</text>"#, frame.x(p), H - BOTTOM + 16.0);
    }
    for (idx, c) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", frame.x(p.fraction.fraction()), frame.y(value(p))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="curve" data-algorithm="{}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            c.algorithm,
            pts.join(" ")
        );
        let ly = TOP + 16.0 * idx as f64;
        let lx = W - RIGHT + 16.0;
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            c.algorithm
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Box plots of per-(algorithm, seed) nDCG at 0.50 and 1.00 for each group;
/// `None` when no curve has a 0.50 point.
fn svg_groups(dataset: &str, curves: &[&Curve], groups: &GroupMap) -> Option<String> {
    let half = DownsampleLevel::new(0.5).ok()?;
    if !curves.iter().any(|c| c.at(half).is_some()) {
        return None;
    }
    let mut boxes: Vec<(String, Vec<f64>)> = Vec::new();
    for (name, members) in groups.groups() {
        for level in [half, DownsampleLevel::FULL] {
            let mut vals: Vec<f64> = curves
                .iter()
                .filter(|c| members.contains(&c.algorithm))
                .filter_map(|c| c.at(level))
                .flat_map(|p| p.values.iter().copied())
                .collect();
            vals.sort_by(f64::total_cmp);
            boxes.push((format!("{name} @ {}", level.label()), vals));
        }
    }
    let top = boxes.iter().flat_map(|(_, v)| v.iter().copied()).fold(0.0f64, f64::max);
    let frame = Frame {
        y_max: if top > 0.0 { top * 1.1 } else { 1.0 },
    };
    let mut s = String::new();
    frame.axes(&mut s, &format!("{dataset}: nDCG@10 at 50% vs 100% of training data"), "group @ fraction", "nDCG@10");
    let slot = 1.0 / boxes.len() as f64;
    for (idx, (label, vals)) in boxes.iter().enumerate() {
        let cx = frame.x(slot * (idx as f64 + 0.5));
        let half_w = (W - LEFT - RIGHT) * slot * 0.3;
        let _ = writeln!(s, r#"<text x="{cx}" y="{}" text-anchor="middle">{}</text>"#, H - BOTTOM + 16.0, xml_escape(label));
        if vals.is_empty() {
            continue;
        }
        let [lo, q1, med, q3, hi] = [0.0, 0.25, 0.5, 0.75, 1.0].map(|q| frame.y(quantile(vals, q)));
        let color = if idx % 2 == 0 { "#9ecae1" } else { "#3182bd" };
        let _ = writeln!(
            s,
            r#"<g class="box" data-label="{}" data-n="{}"><line x1="{cx}" y1="{lo:.2}" x2="{cx}" y2="{hi:.2}" stroke="black"/><rect x="{:.2}" y="{q3:.2}" width="{:.2}" height="{:.2}" fill="{color}" stroke="black"/><line x1="{:.2}" y1="{med:.2}" x2="{:.2}" y2="{med:.2}" stroke="black" stroke-width="2"/></g>"#,
            xml_escape(label),
            vals.len(),
            cx - half_w,
            2.0 * half_w,
            (q1 - q3).max(0.5),
            cx - half_w,
            cx + half_w,
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}
