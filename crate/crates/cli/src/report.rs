use vpcal_core::synth::write_atomic;

use crate::eval::EvalOutput;
use crate::{files, CliError, ReportArgs};

pub(crate) fn run(a: &ReportArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.report).map_err(|e| CliError::io(&a.report, e))?;
    let out: EvalOutput = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", a.report.display())))?;
    let report = &out.report;
    if report.records.is_empty() {
        return Err(CliError::Config(format!(
            "{} contains no records, nothing to plot",
            a.report.display()
        )));
    }
    if report.recompute()? != report.aggregates {
        return Err(CliError::Data(format!(
            "{}: aggregates do not match the records",
            a.report.display()
        )));
    }
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let mut csv = Vec::new();
    report.write_curve_csv(&mut csv)?;
    write_atomic(&a.out.join(files::CURVE_CSV), &csv)?;
    write_atomic(
        &a.out.join(files::CURVE_SVG),
        report.curve_svg()?.as_bytes(),
    )?;
    Ok(())
}
