use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use vrpdi::{load_instance, Instance, ParseOptions};

/// Instance files directly inside `dir`, sorted by path.
pub fn instance_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry?.path();
        let hidden = path
            .file_name()
            .is_some_and(|n| n.to_string_lossy().starts_with('.'));
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// File in `files` whose stem equals `name`, ignoring case.
pub fn find<'a>(files: &'a [PathBuf], name: &str) -> Option<&'a PathBuf> {
    files.iter().find(|p| {
        p.file_stem()
            .is_some_and(|s| s.to_string_lossy().eq_ignore_ascii_case(name))
    })
}

pub fn options(fraction: Option<f64>) -> anyhow::Result<ParseOptions> {
    if let Some(f) = fraction {
        anyhow::ensure!(
            f > 0.0 && f.is_finite(),
            "--max-drone-fraction must be positive, got {f}"
        );
    }
    Ok(ParseOptions {
        max_drone_distance_fraction: fraction,
        ..ParseOptions::default()
    })
}

pub fn load(path: &Path, fraction: Option<f64>) -> anyhow::Result<Instance> {
    load_instance(path, &options(fraction)?).with_context(|| format!("loading {}", path.display()))
}

/// Loads `target` as a path, or failing that as a dataset name inside
/// `data_dir`.
pub fn resolve(target: &str, data_dir: Option<&Path>, fraction: Option<f64>) -> anyhow::Result<Instance> {
    let direct = Path::new(target);
    if direct.exists() {
        return load(direct, fraction);
    }
    if let Some(dir) = data_dir.filter(|d| d.is_dir()) {
        let files = instance_files(dir)?;
        if let Some(path) = find(&files, target) {
            return load(path, fraction);
        }
        anyhow::bail!("no instance `{target}` as a file or inside {}", dir.display());
    }
    anyhow::bail!("instance file not found: {target}")
}
