use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{auc_cumulative, cumulative_curve, MetricsError};

/// Header of the per-image CSV written by [`EvalReport::write_csv`].
pub const CSV_HEADER: &str =
    "id,up_err_deg,pitch_err_deg,roll_err_deg,fov_err_deg,horizon_err,config_hash";

/// Errors for one image. `horizon_err` is normalized by image height.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub id: String,
    pub up_err_deg: f64,
    pub pitch_err_deg: f64,
    pub roll_err_deg: f64,
    pub fov_err_deg: f64,
    pub horizon_err: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub median: f64,
}

impl ColumnStats {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let mut v: Vec<f64> = values.collect();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let mean = v.iter().sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        };
        Self { mean, median }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub count: usize,
    pub up: ColumnStats,
    pub pitch: ColumnStats,
    pub roll: ColumnStats,
    pub fov: ColumnStats,
    pub horizon: ColumnStats,
    pub auc_percent: f64,
}

/// Per-image errors plus their aggregates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Horizon-error bound of the AUC, fraction of image height.
    pub x_max: f64,
    pub config_hash: String,
    pub records: Vec<EvalRecord>,
    pub aggregates: Aggregates,
}

impl EvalReport {
    pub fn from_records(
        records: Vec<EvalRecord>,
        x_max: f64,
        config_hash: impl Into<String>,
    ) -> Result<Self, MetricsError> {
        let aggregates = aggregate(&records, x_max)?;
        Ok(Self {
            x_max,
            config_hash: config_hash.into(),
            records,
            aggregates,
        })
    }

    /// Recomputes the aggregates from the records.
    pub fn recompute(&self) -> Result<Aggregates, MetricsError> {
        aggregate(&self.records, self.x_max)
    }

    pub fn horizon_errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.horizon_err).collect()
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.id,
                r.up_err_deg,
                r.pitch_err_deg,
                r.roll_err_deg,
                r.fov_err_deg,
                r.horizon_err,
                self.config_hash
            )?;
        }
        Ok(())
    }

    /// Cumulative horizon-error curve as `horizon_err,percent` rows.
    pub fn write_curve_csv<W: Write>(&self, out: &mut W) -> Result<(), MetricsError> {
        let curve = cumulative_curve(&self.horizon_errors(), self.x_max)?;
        let io = |e: std::io::Error| MetricsError::Io(e.to_string());
        writeln!(out, "# config_hash {}", self.config_hash).map_err(io)?;
        writeln!(out, "horizon_err,percent").map_err(io)?;
        for (x, y) in curve {
            writeln!(out, "{x},{y}").map_err(io)?;
        }
        Ok(())
    }

    /// Cumulative horizon-error plot.
    pub fn curve_svg(&self) -> Result<String, MetricsError> {
        let curve = cumulative_curve(&self.horizon_errors(), self.x_max)?;
        Ok(render_svg(
            &curve,
            self.x_max,
            self.aggregates.auc_percent,
            &self.config_hash,
        ))
    }
}

fn aggregate(records: &[EvalRecord], x_max: f64) -> Result<Aggregates, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::EmptyList);
    }
    let col = |f: fn(&EvalRecord) -> f64| ColumnStats::of(records.iter().map(f));
    let horizon: Vec<f64> = records.iter().map(|r| r.horizon_err).collect();
    Ok(Aggregates {
        count: records.len(),
        up: col(|r| r.up_err_deg),
        pitch: col(|r| r.pitch_err_deg),
        roll: col(|r| r.roll_err_deg),
        fov: col(|r| r.fov_err_deg),
        horizon: col(|r| r.horizon_err),
        auc_percent: auc_cumulative(&horizon, x_max)?,
    })
}

fn render_svg(curve: &[(f64, f64)], x_max: f64, auc: f64, config_hash: &str) -> String {
    const W: f64 = 480.0;
    const H: f64 = 360.0;
    const PAD: f64 = 48.0;
    let px = |x: f64| PAD + x / x_max * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - y / 100.0 * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, "<!-- config_hash {config_hash} -->");
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{:.2} {:.2} L{:.2} {:.2} L{:.2} {:.2}" fill="none" stroke="black"/>"#,
        px(0.0),
        py(100.0),
        px(0.0),
        py(0.0),
        px(x_max),
        py(0.0)
    );
    for i in 0..=5 {
        let x = x_max * f64::from(i) / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{x:.2}</text>"#,
            px(x),
            py(0.0) + 16.0
        );
        let y = 20.0 * f64::from(i);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{y:.0}</text>"#,
            px(0.0) - 6.0,
            py(y) + 4.0
        );
    }
    let points: Vec<String> = curve
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        points.join(" ")
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">horizon error / image height</text>"#,
        W / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">fraction of images (%)</text>"#,
        H / 2.0,
        H / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-size="13" text-anchor="middle">AUC {auc:.2}%</text>"#,
        W / 2.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rec(id: &str, up: f64, horizon: f64) -> EvalRecord {
        EvalRecord {
            id: id.into(),
            up_err_deg: up,
            pitch_err_deg: up / 2.0,
            roll_err_deg: 0.0,
            fov_err_deg: 1.0,
            horizon_err: horizon,
        }
    }

    #[test]
    fn aggregates() {
        let r = EvalReport::from_records(
            vec![rec("a", 1.0, 0.0), rec("b", 3.0, 0.125), rec("c", 8.0, 1.0)],
            0.25,
            "h",
        )
        .unwrap();
        let a = r.aggregates;
        assert_eq!(a.count, 3);
        assert_abs_diff_eq!(a.up.mean, 4.0);
        assert_eq!(a.up.median, 3.0);
        assert_abs_diff_eq!(a.auc_percent, 50.0, epsilon = 1e-12);
        assert_eq!(r.recompute().unwrap(), a);

        let even = EvalReport::from_records(vec![rec("a", 1.0, 0.0), rec("b", 2.0, 0.0)], 0.25, "")
            .unwrap();
        assert_eq!(even.aggregates.up.median, 1.5);
        assert!(EvalReport::from_records(vec![], 0.25, "").is_err());
    }

    #[test]
    fn csv_layout() {
        let r = EvalReport::from_records(vec![rec("000001", 0.5, 0.01)], 0.25, "abc").unwrap();
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            format!("{CSV_HEADER}\n000001,0.5,0.25,0,1,0.01,abc\n")
        );
        let mut curve = Vec::new();
        r.write_curve_csv(&mut curve).unwrap();
        assert_eq!(
            String::from_utf8(curve).unwrap(),
            "# config_hash abc\nhorizon_err,percent\n0,0\n0.01,0\n0.01,100\n0.25,100\n"
        );
        let svg = r.curve_svg().unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("AUC 96.00%"));
    }
}
