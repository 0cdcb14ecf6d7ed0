//! Instance files, classic style generation and bug repository mining.

mod classic;
mod format;
mod mining;

pub use classic::{generate_classic, generate_classic_dependent, ClassicGenSpec, LevelSpec, PRESET_NAMES};
pub use format::{
    format_instance, parse_dependent, parse_instance, read_instance, write_instance,
};
pub use mining::{
    mine_instance, parse_dump, read_dump, BugDumpRecord, CountRange, MinedInstance, MinerSpec,
};

/// `⌊ratio · total⌋`, tolerant of the representation error in ratios such
/// as `0.3`.
pub fn bound_for_ratio(ratio: f64, total: u64) -> u64 {
    let exact = ratio * total as f64;
    let nearest = exact.round();
    if (exact - nearest).abs() <= 1e-9 * exact.abs().max(1.0) {
        nearest as u64
    } else {
        exact.floor() as u64
    }
}
