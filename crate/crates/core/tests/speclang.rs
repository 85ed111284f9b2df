mod common;

use common::*;
use ncdb::freealg::{GenId, Letter, Tensor2, Word};
use ncdb::speclang::{parse, SpecDocument};
use ncdb::Q;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let doc = random_doc(seed);
        let text = doc.render();
        let back = parse(&text);
        prop_assert!(back.is_ok(), "{}\n{:?}", text, back.err());
        let back = back.unwrap();
        prop_assert_eq!(&back, &doc, "{}", text);
        prop_assert_eq!(back.render(), text);
    }
}

#[test]
fn grammar_examples() {
    let d = parse("algebra x1 x2 x3; bracket {x1,x2} = -1 * x2*x1 (x) 1;").unwrap();
    let want = Tensor2::pure(Word::gens(&[1, 0]), Word::one(), -Q::one());
    assert_eq!(d.entries[&(GenId(0), GenId(1))], want);
    let spec = d.to_spec().unwrap();
    assert_eq!(spec.table().len(), 1);

    assert!(parse("algebra x1; bracket;").unwrap().to_spec().unwrap().table().is_empty());

    let d = parse("algebra x1 inv x2;\nbracket {x2,x1} = 1/2 * x1^-1 (x) x1^-1*x2;").unwrap();
    let xi = Letter::neg(GenId(0));
    let t = &d.entries[&(GenId(1), GenId(0))];
    assert_eq!(
        *t,
        Tensor2::pure(Word::letter(xi), Word::from_letters([xi, Letter::pos(GenId(1))]), Q::new(1, 2))
    );
    assert!(d.to_spec().unwrap().algebra().is_invertible(GenId(0)));
}

#[test]
fn whitespace_and_unicode_tensor_are_accepted() {
    let a = parse("algebra a b;bracket{a,b}=a⊗b-2*b⊗a;").unwrap();
    let b = parse("algebra a b ;\n\n bracket\n {a , b} =\n a (x) b\n - 2 * b (x) a ;").unwrap();
    assert_eq!(a, b);
}

#[test]
fn equal_documents_render_identically() {
    let mut x = parse("algebra a b; bracket {b,a} = a (x) b + b (x) a; {a,b} = 1 (x) 1;").unwrap();
    let y = parse("algebra a b; bracket {a,b} = 1 (x) 1; {b,a} = b (x) a + a (x) b;").unwrap();
    assert_eq!(x, y);
    assert_eq!(x.render(), y.render());
    x.comments.push("extra".into());
    assert_ne!(x.render(), y.render());
}

#[test]
fn errors_name_the_expected_token() {
    let e = parse("algebra a;\nbracket {a a} = 0;").unwrap_err();
    assert_eq!((e.line, e.col), (2, 12));
    assert_eq!(e.expected, vec!["`,`"]);
    assert!(e.to_string().starts_with("2:12: expected `,`"), "{e}");

    let e = parse("algebra a;\nbracket {a,a} = 2 (x) ;").unwrap_err();
    assert_eq!((e.line, e.col), (2, 23));
    assert!(e.expected.contains(&"generator name".to_string()));

    let e = parse("algebra a; bracket {a,a} = a^-1 (x) 1;").unwrap_err();
    assert!(e.message.contains("not declared `inv`"));

    assert!(parse("algebra a; weight 1; weight 1;").unwrap_err().message.contains("duplicate"));
    assert!(parse("weight 1; algebra a;").is_err());
    assert!(parse("algebra a; bracket {a,a} = a^-2 (x) 1;").is_err());
    assert!(parse("algebra a @;").is_err());
}

#[test]
fn from_spec_round_trips() {
    use ncdb::classify::{build, FamilyParams};
    for p in [FamilyParams::MdbI, FamilyParams::MdbII, FamilyParams::Cld2 { d: 5, delta: 3 }] {
        let (spec, _) = build(&p).unwrap();
        let doc = SpecDocument::from_spec(&spec, Some("x"));
        let back = parse(&doc.render()).unwrap().to_spec().unwrap();
        assert_eq!(back, spec);
        assert!(doc.lint().is_empty());
    }
}
