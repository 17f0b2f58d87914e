use serde::de::DeserializeOwned;
use serde::Serialize;

use logkfl::abelian::FgAbGroup;
use logkfl::calculators::{dedekind_calculator, dvr_calculator, CohomologyTable, Mode};
use logkfl::coefficients::SymbolicModule;
use logkfl::cohomology::{profinite_colimit_bruteforce, Colimit, FiniteAbelianGroup};
use logkfl::direct_image::{higher_direct_image, BaseDescription, DirectImageExpr, SheafSpec};
use logkfl::kummer::LogPointModel;

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let s = serde_json::to_string(x).unwrap();
    let back: T = serde_json::from_str(&s).unwrap();
    assert_eq!(&back, x, "{s}");
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
}

#[test]
fn groups_and_modules() {
    for g in ["0", "Z", "Z/6+Z/4", "Z^3+Z/2"] {
        round_trip(&g.parse::<FgAbGroup>().unwrap());
    }
    for m in ["0", "Z/3(-1)", "Q_5/Z_5(2)^3", "(Q/Z)^(2')(-1)+Z"] {
        round_trip(&m.parse::<SymbolicModule>().unwrap());
    }
    round_trip(&FiniteAbelianGroup::new(vec![2, 6]).unwrap());
    round_trip(&LogPointModel::new(2, 5).unwrap());
}

#[test]
fn outputs() {
    let c: Colimit = profinite_colimit_bruteforce(2, &"Z/4".parse().unwrap(), 3, 2, &[4, 16, 64]).unwrap();
    round_trip(&c);
    let base = BaseDescription::log_trait(0, 5, Some(5)).unwrap();
    round_trip(&base);
    let e: DirectImageExpr = higher_direct_image(&base, &SheafSpec::Lattice { rank: 2 }, 2).unwrap();
    round_trip(&e);
    let t: CohomologyTable = dvr_calculator(7, 7, &SheafSpec::cyclic(3, 1).unwrap(), Mode::Computed).unwrap();
    round_trip(&t);
    let b: BaseDescription = serde_json::from_str(
        r#"{"kind":"dedekind","generic_char":0,"points":[{"label":"a","p":2,"q":4,"log_rank":1}]}"#,
    )
    .unwrap();
    round_trip(&dedekind_calculator(&b, &SheafSpec::cyclic(3, 1).unwrap(), None, Mode::Computed).unwrap());
}

#[test]
fn table_layout() {
    let t = dvr_calculator(7, 7, &SheafSpec::cyclic(3, 1).unwrap(), Mode::Computed).unwrap();
    let v = serde_json::to_value(&t).unwrap();
    assert_eq!(v["mode"], "computed");
    assert!(v["entries"][0].get("module").is_some());
    assert!(v["entries"][1]["extension"].get("sub").is_some());
    assert!(v["entries"][1]["extension"].get("quot").is_some());
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());
}
