mod common;

use common::{enumerate_table, max_table_deviation, SmallCode};
use eaed_core::transition::ExactBiweight;
use eaed_core::{ComponentCode, Decoder, TransitionTable, Variant, WeightTables};

#[test]
fn eaed_plus_table_matches_exhaustive_enumeration() {
    let code = ComponentCode::bch(4, 2).unwrap();
    let small = SmallCode::new(&code);
    let table = TransitionTable::eaed_plus(&code, &WeightTables::for_code(&code)).unwrap();
    let (dev, at) = max_table_deviation(&table, &enumerate_table(&small, Decoder::EaedPlus));
    assert!(dev < 1e-10, "{dev} ({at})");
}

#[test]
fn eaed_table_with_exact_biweight_matches_exhaustive_enumeration() {
    let code = ComponentCode::bch(4, 2).unwrap();
    let small = SmallCode::new(&code);
    let w = WeightTables::for_code(&code);
    let table = TransitionTable::eaed(&code, &w, &ExactBiweight::new(&code)).unwrap();
    let (dev, at) = max_table_deviation(&table, &enumerate_table(&small, Decoder::Eaed));
    assert!(dev < 1e-10, "{dev} ({at})");
}

#[test]
fn even_weight_subcode_tables_match_enumeration() {
    let code = ComponentCode::bch(4, 2).unwrap().derive(Variant::EvenWeight).unwrap();
    let small = SmallCode::new(&code);
    let w = WeightTables::for_code(&code);
    let plus = TransitionTable::eaed_plus(&code, &w).unwrap();
    let (dev, at) = max_table_deviation(&plus, &enumerate_table(&small, Decoder::EaedPlus));
    assert!(dev < 1e-10, "EaED+ {dev} ({at})");
    let eaed = TransitionTable::eaed(&code, &w, &ExactBiweight::new(&code)).unwrap();
    let (dev, at) = max_table_deviation(&eaed, &enumerate_table(&small, Decoder::Eaed));
    assert!(dev < 1e-10, "EaED {dev} ({at})");
}

/// With the biweight approximation the EaED table is no longer exact; the
/// deviation is reported and loosely bounded.
#[test]
fn approximate_biweight_table_stays_close() {
    let code = ComponentCode::bch(4, 2).unwrap();
    let small = SmallCode::new(&code);
    let table = TransitionTable::build(&code, Decoder::Eaed, &WeightTables::for_code(&code)).unwrap();
    let (dev, at) = max_table_deviation(&table, &enumerate_table(&small, Decoder::Eaed));
    println!("approximate-biweight EaED table: max deviation {dev:.3e} ({at})");
    assert!(dev < 0.25);
}
