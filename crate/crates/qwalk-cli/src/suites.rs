//! Suites shipped with the tool, embedded from `suites/`.

use crate::config::{AnalysisConfig, ConfigError};

pub const FIVE_MODELS: &[(&str, &str)] = &[
    ("1-nw-n-se.cfg", include_str!("../suites/five-models/1-nw-n-se.cfg")),
    ("2-nw-n-e-se.cfg", include_str!("../suites/five-models/2-nw-n-e-se.cfg")),
    ("3-nw-ne-se.cfg", include_str!("../suites/five-models/3-nw-ne-se.cfg")),
    ("4-nw-n-ne-se.cfg", include_str!("../suites/five-models/4-nw-n-ne-se.cfg")),
    ("5-nw-n-ne-e-se.cfg", include_str!("../suites/five-models/5-nw-n-ne-e-se.cfg")),
];

pub const CONFIGURATIONS: &[(&str, &str)] = &[
    ("config-1.cfg", include_str!("../suites/configurations/config-1.cfg")),
    ("config-2.cfg", include_str!("../suites/configurations/config-2.cfg")),
    ("config-3.cfg", include_str!("../suites/configurations/config-3.cfg")),
    ("config-4.cfg", include_str!("../suites/configurations/config-4.cfg")),
    ("config-5.cfg", include_str!("../suites/configurations/config-5.cfg")),
    ("config-6.cfg", include_str!("../suites/configurations/config-6.cfg")),
    ("config-7.cfg", include_str!("../suites/configurations/config-7.cfg")),
    ("config-8.cfg", include_str!("../suites/configurations/config-8.cfg")),
];

pub fn bundled(name: &str) -> Option<Vec<(String, Result<AnalysisConfig, ConfigError>)>> {
    let files = match name {
        "five-models" => FIVE_MODELS,
        "configurations" => CONFIGURATIONS,
        _ => return None,
    };
    Some(files.iter().map(|(n, text)| (n.to_string(), text.parse())).collect())
}
