//! Case files shipped with the repository, embedded for `verify --all`.

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        pub const BUNDLED: &[(&str, &str)] = &[$(($name, include_str!(concat!("../../../cases/", $name, ".json")))),*];
    };
}

bundled![
    "rel1_pt_c2",
    "rel1_p1_trivial",
    "rel1_p1_trivial_d2",
    "rel1_p1_o1",
    "rel1_p2_trivial",
    "cor_main_p1_trivial",
    "cor_main_p1_o1",
    "cor_main_p2_trivial",
    "rel2_pt_c2",
    "rel2_pt_c2_e1",
    "rel2_p1_trivial",
    "rel3_pt_c2_k2",
    "rel3_p1_trivial",
    "rel4_pt_c2_k2",
    "pn_fibration_demo",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CaseFile;

    #[test]
    fn bundled_cases_load() {
        for (name, text) in BUNDLED {
            let c = CaseFile::from_json(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(name.starts_with(c.identity.as_str()), "{name}");
            assert!(c.to_case().unwrap().is_ok(), "{name}");
        }
    }
}
