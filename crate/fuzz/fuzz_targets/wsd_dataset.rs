#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(instances) = sensespace::eval::read_wsd(data) {
        assert!(instances.iter().all(|i| !i.gold.is_empty()));
    }
});
