//! One module per subcommand. Each `run` resolves its inputs (flag over
//! config over out-dir default), executes through the run log, writes its
//! declared outputs, and returns a machine-readable summary.

pub mod aggregate;
pub mod agree;
pub mod annotate;
pub mod circle;
pub mod evaluate;
pub mod filter;
pub mod predict;
pub mod report;
pub mod structure;
pub mod thresholds;
pub mod train;

use std::path::PathBuf;

/// flag > config > fallback (typically a file a previous stage wrote into
/// the out directory).
pub(crate) fn resolve(
    flag: Option<PathBuf>,
    config: Option<&PathBuf>,
    fallback: Option<PathBuf>,
) -> Option<PathBuf> {
    flag.or_else(|| config.cloned()).or(fallback)
}
