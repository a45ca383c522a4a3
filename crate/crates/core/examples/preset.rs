//! Regenerates the spectra of one figure into a temporary directory.

use optosqueeze::presets::{self, PresetOptions};

fn main() -> optosqueeze::Result<()> {
    let dir = std::env::temp_dir().join("optosqueeze-preset");
    for path in presets::write_preset("fig2a", &dir, &PresetOptions::default())? {
        println!("{}", path.display());
    }
    Ok(())
}
