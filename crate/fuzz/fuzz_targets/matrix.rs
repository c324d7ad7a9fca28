#![no_main]

use libfuzzer_sys::fuzz_target;
use ppdlab::gaussian::QuadraticFormSpd;
use ppdlab::io::parse_matrix;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_matrix(s) {
        let n = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == n));
    }
    if let Ok(a) = s.parse::<QuadraticFormSpd>() {
        let again: QuadraticFormSpd = a.to_string().parse().expect("display round-trips");
        assert_eq!(again, a);
    }
});
