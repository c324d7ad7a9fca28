#![no_main]

use libfuzzer_sys::fuzz_target;
use ppdlab::io::MeasureFile;
use ppdlab::Cyclotomic;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = MeasureFile::parse(s) else {
        return;
    };
    let Ok(mu) = file.to_measure::<Cyclotomic>() else {
        return;
    };
    let text = MeasureFile::from_measure(&mu).to_json();
    let back = MeasureFile::parse(&text)
        .expect("emitted JSON parses")
        .to_measure::<Cyclotomic>()
        .expect("emitted values decode");
    assert_eq!(back.density(), mu.density());
    assert_eq!(back.haar().scale(), mu.haar().scale());
});
