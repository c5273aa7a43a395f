#![no_main]

use libfuzzer_sys::fuzz_target;
use sensespace::format::{read_annotated, AnnotatedLine};

fuzz_target!(|data: &[u8]| {
    let _ = read_annotated(data);
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(line) = s.parse::<AnnotatedLine>() {
        let rendered = line.to_string();
        assert_eq!(rendered.parse::<AnnotatedLine>().unwrap(), line);
    }
});
