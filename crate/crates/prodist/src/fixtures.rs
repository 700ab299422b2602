//! Files bundled into the binary: the three published schedule tables and
//! one synthetic instance per scenario.

use prodist_core::scenario::ScenarioName;

pub const TABLE1: &str = include_str!("../fixtures/table1.csv");
pub const TABLE2: &str = include_str!("../fixtures/table2.csv");
pub const TABLE3: &str = include_str!("../fixtures/table3.csv");

pub const BASELINE_INSTANCE: &str = include_str!("../fixtures/baseline.instance.json");
pub const DC_EXPANSION_INSTANCE: &str = include_str!("../fixtures/dc_expansion.instance.json");
pub const NETWORK_EXPANSION_INSTANCE: &str =
    include_str!("../fixtures/network_expansion.instance.json");

/// Schedule table published for a scenario.
pub fn table(name: ScenarioName) -> &'static str {
    match name {
        ScenarioName::Baseline => TABLE1,
        ScenarioName::DcExpansion => TABLE2,
        ScenarioName::NetworkExpansion => TABLE3,
    }
}

pub fn table_file_name(name: ScenarioName) -> &'static str {
    match name {
        ScenarioName::Baseline => "table1.csv",
        ScenarioName::DcExpansion => "table2.csv",
        ScenarioName::NetworkExpansion => "table3.csv",
    }
}

/// Synthetic instance for a scenario, as JSON.
pub fn instance(name: ScenarioName) -> &'static str {
    match name {
        ScenarioName::Baseline => BASELINE_INSTANCE,
        ScenarioName::DcExpansion => DC_EXPANSION_INSTANCE,
        ScenarioName::NetworkExpansion => NETWORK_EXPANSION_INSTANCE,
    }
}

pub fn instance_file_name(name: ScenarioName) -> String {
    format!("{name}.instance.json")
}
