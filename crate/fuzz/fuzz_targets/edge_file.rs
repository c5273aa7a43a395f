#![no_main]

use libfuzzer_sys::fuzz_target;
use sensespace::semnet::load_network;

fuzz_target!(|data: &[u8]| {
    let Ok(net) = load_network(data) else { return };
    // Whatever loads must serialize to a file that loads back the same.
    let mut first = Vec::new();
    net.write(&mut first).unwrap();
    let again = load_network(first.as_slice()).unwrap();
    let mut second = Vec::new();
    again.write(&mut second).unwrap();
    assert_eq!(first, second);
    assert_eq!(net.edge_count(), again.edge_count());
});
