#![no_main]

use libfuzzer_sys::fuzz_target;
use polyrigid::io::{parse_framework, parse_graph, write_framework};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_graph(s);
    if let Ok(fw) = parse_framework(s) {
        let text = write_framework(&fw);
        let back = parse_framework(&text).expect("canonical output parses");
        assert_eq!(write_framework(&back), text);
        let _ = fw.is_well_positioned();
    }
});
