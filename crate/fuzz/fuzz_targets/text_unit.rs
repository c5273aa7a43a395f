#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use sensespace::annotator::{connect, ConnectivityParams, TextUnit};
use sensespace::format::AnnotatedLine;
use sensespace::semnet::{load_lexicon, load_network, Lexicon, SemanticNetwork};

fn semnet() -> &'static (SemanticNetwork, Lexicon) {
    static NET: OnceLock<(SemanticNetwork, Lexicon)> = OnceLock::new();
    NET.get_or_init(|| {
        let net = load_network("s1\ts3\ns2\ts4\ns3\ts5\ns4\ts5\n".as_bytes()).unwrap();
        let lex = load_lexicon(
            "bank\ts1,s2\nwater\ts3\nriver\ts5,s4\nriver_bank\ts4\nb\ts1,s2,s3,s4,s5\n".as_bytes(),
            &net,
        )
        .unwrap();
        (net, lex)
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let line = s.lines().next().unwrap_or("");
    let Ok(Some(unit)) = TextUnit::parse(line) else { return };
    let (net, lex) = semnet();
    let out = connect(&unit, lex, net, &ConnectivityParams::default());
    // The rendered annotation is always a well-formed annotated line.
    let rendered = out.to_line(net).to_string();
    rendered.parse::<AnnotatedLine>().unwrap();
});
