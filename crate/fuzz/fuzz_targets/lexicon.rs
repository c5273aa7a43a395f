#![no_main]

use libfuzzer_sys::fuzz_target;
use sensespace::semnet::{load_lexicon, load_network, parse_lexicon};

fuzz_target!(|data: &[u8]| {
    let Ok(entries) = parse_lexicon(data) else { return };
    // A network holding exactly the referenced ids accepts the lexicon.
    let mut edges = String::new();
    for (_, ids) in &entries {
        for id in ids {
            edges.push_str(&format!("#node\t{id}\n"));
        }
    }
    let net = load_network(edges.as_bytes()).unwrap();
    let lex = load_lexicon(data, &net).unwrap();
    for (form, ids) in &entries {
        assert_eq!(lex.lookup(form).len(), ids.len());
    }
});
