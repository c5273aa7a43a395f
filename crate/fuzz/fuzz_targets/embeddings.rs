#![no_main]

use libfuzzer_sys::fuzz_target;
use sensespace::model::Embeddings;

fuzz_target!(|data: &[u8]| {
    let Ok(emb) = Embeddings::read(data) else { return };
    let mut first = Vec::new();
    emb.write(&mut first).unwrap();
    let back = Embeddings::read(first.as_slice()).unwrap();
    let mut second = Vec::new();
    back.write(&mut second).unwrap();
    assert_eq!(first, second);
});
