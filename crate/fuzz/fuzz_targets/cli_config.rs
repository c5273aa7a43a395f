#![no_main]

use libfuzzer_sys::fuzz_target;
use sensespace_cli::config::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_config(s) {
        for e in &entries {
            assert!(!e.key.is_empty() && !e.key.contains('='));
        }
    }
});
