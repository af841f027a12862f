//! Runs every bundled config in `configs/` through the library front end
//! and writes the outputs into a temporary directory.

use std::path::Path;

use entropyflow::experiments::{output_stem, run, write_outputs, ExperimentConfig};

fn main() -> entropyflow::Result<()> {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let out = std::env::temp_dir().join("entropyflow-examples");
    let mut entries: Vec<_> = std::fs::read_dir(&configs)?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    entries.sort();
    for path in entries.iter().filter(|p| p.extension().is_some_and(|e| e == "json")) {
        let cfg = ExperimentConfig::from_path(path)?;
        let result = run(&cfg)?;
        let stem = output_stem(&cfg, Some(&out));
        let cfg_format = cfg.output.as_ref().map(|o| o.format).unwrap_or_default();
        let files = write_outputs(&result, &stem, cfg_format, None)?;
        println!(
            "{:<28} {:<22} rows {:>5} passed {}  -> {}",
            path.file_name().unwrap().to_string_lossy(),
            cfg.kind.as_str(),
            result.table.rows.len(),
            result.passed,
            files.json.or(files.csv).map(|p| p.display().to_string()).unwrap_or_default()
        );
    }
    Ok(())
}
