//! Figure-reproduction scenarios compiled into the binary.

use crate::config::{self, Scenario};
use crate::error::CliError;

/// `(name, TOML source)` in listing order.
pub const BUNDLED: &[(&str, &str)] = &[
    ("fig2a", include_str!("../scenarios/fig2a.toml")),
    ("fig2b", include_str!("../scenarios/fig2b.toml")),
    ("fig3a", include_str!("../scenarios/fig3a.toml")),
    ("fig3b", include_str!("../scenarios/fig3b.toml")),
    ("fig4a", include_str!("../scenarios/fig4a.toml")),
    ("fig4b", include_str!("../scenarios/fig4b.toml")),
    ("fig5", include_str!("../scenarios/fig5.toml")),
    ("fig6a", include_str!("../scenarios/fig6a.toml")),
    ("fig6b", include_str!("../scenarios/fig6b.toml")),
    ("fig6c", include_str!("../scenarios/fig6c.toml")),
    ("fig6d", include_str!("../scenarios/fig6d.toml")),
    ("fig6e", include_str!("../scenarios/fig6e.toml")),
    ("fig6f", include_str!("../scenarios/fig6f.toml")),
    ("fig7a", include_str!("../scenarios/fig7a.toml")),
    ("fig7b", include_str!("../scenarios/fig7b.toml")),
    ("fig7c", include_str!("../scenarios/fig7c.toml")),
    ("fig7d", include_str!("../scenarios/fig7d.toml")),
    ("fig7e", include_str!("../scenarios/fig7e.toml")),
    ("fig7f", include_str!("../scenarios/fig7f.toml")),
    ("fig8a", include_str!("../scenarios/fig8a.toml")),
    ("fig8b", include_str!("../scenarios/fig8b.toml")),
    ("fig8c", include_str!("../scenarios/fig8c.toml")),
    ("fig8d", include_str!("../scenarios/fig8d.toml")),
    ("fig8e", include_str!("../scenarios/fig8e.toml")),
    ("fig8f", include_str!("../scenarios/fig8f.toml")),
    ("fig9a", include_str!("../scenarios/fig9a.toml")),
    ("fig9b", include_str!("../scenarios/fig9b.toml")),
    ("fig9c", include_str!("../scenarios/fig9c.toml")),
    ("fig9d", include_str!("../scenarios/fig9d.toml")),
    ("fig9e", include_str!("../scenarios/fig9e.toml")),
    ("fig9f", include_str!("../scenarios/fig9f.toml")),
    ("fig10a", include_str!("../scenarios/fig10a.toml")),
    ("fig10b", include_str!("../scenarios/fig10b.toml")),
    ("fig10c", include_str!("../scenarios/fig10c.toml")),
    ("fig10d", include_str!("../scenarios/fig10d.toml")),
    ("fig10e", include_str!("../scenarios/fig10e.toml")),
    ("fig10f", include_str!("../scenarios/fig10f.toml")),
];

pub fn load(name: &str) -> Result<Scenario, CliError> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CliError::Config(format!("no bundled scenario named '{name}' (see --list)")))?;
    let mut parsed = config::parse(text)?;
    Ok(parsed.remove(0))
}

/// One `name: description` line per bundled scenario.
pub fn listing() -> Vec<String> {
    BUNDLED
        .iter()
        .map(|(name, _)| {
            let s = load(name).expect("bundled scenarios are valid");
            format!("{name}: {}", s.description.unwrap_or_default())
        })
        .collect()
}
