#![no_main]

use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;
use ppdlab::fourier::GroupFunction;
use ppdlab::io::FunctionFile;
use ppdlab::Cyclotomic;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = FunctionFile::parse(s) else {
        return;
    };
    let _ = file.to_function::<Complex64>();
    let Ok(f) = file.to_function::<Cyclotomic>() else {
        return;
    };
    let text = FunctionFile::from_function(&f).to_json();
    let back: GroupFunction<Cyclotomic> = FunctionFile::parse(&text)
        .expect("emitted JSON parses")
        .to_function()
        .expect("emitted values decode");
    assert_eq!(back, f);
});
