//! Training losses and benchmark metrics.

mod eval;
mod losses;
mod report;

pub use eval::{
    angle_between, angle_errors, auc_cumulative, cumulative_curve, horizon_error, AngleErrors,
    HorizonError, DEFAULT_AUC_X_MAX,
};
pub use losses::{
    bce_gradient, loss_bce, loss_fov, loss_horizon, loss_zenith, total_loss, BceLoss,
    LossBreakdown, LossWeights, BCE_EPS,
};
pub use report::{Aggregates, ColumnStats, EvalRecord, EvalReport, CSV_HEADER};

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("empty input list")]
    EmptyList,
    #[error("{labels} labels but {scores} scores")]
    LengthMismatch { labels: usize, scores: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
