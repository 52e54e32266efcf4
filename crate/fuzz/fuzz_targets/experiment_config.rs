//! Feeds arbitrary text to the experiment-config parser, then pushes accepted
//! configs through operator and grid resolution. Rejections are fine; panics
//! and unbounded allocations are not.

#![no_main]

use libfuzzer_sys::fuzz_target;
use metaplectic_cli::config::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = ExperimentConfig::parse(text) else { return };
    if let Some(op) = &cfg.operator {
        if let Ok(s) = op.resolve() {
            if let Some(grid) = &cfg.grid {
                let _ = grid.resolve(s.dim());
            }
        }
    }
});
