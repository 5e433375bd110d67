mod oracle;

use oracle::checks;

#[test]
fn csv_export_import_is_lossless() {
    println!("{}", checks::csv_round_trip(31).unwrap());
    println!("{}", checks::csv_round_trip(32).unwrap());
}

#[test]
fn corpus_files_are_bit_identical() {
    println!("{}", checks::corpus_files_round_trip(33).unwrap());
}

#[test]
fn share_urls_decode_to_the_same_state() {
    println!("{}", checks::share_round_trip(1000, 34).unwrap());
}

#[test]
fn icy_blocks_round_trip() {
    println!("{}", checks::icy_round_trip(1000, 35).unwrap());
}
