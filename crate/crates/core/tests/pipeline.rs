use flab_core::pipeline::betti_drop;
use flab_core::suite;
use flab_core::*;

const ORDER: [&str; 6] = ["homology", "brown_rank1", "brown_rank2", "alexander", "brown_quotient", "cover"];

fn verdict(p: &Presentation) -> FibredVerdict {
    decide_fibred(p, &FibredOptions::default())
}

#[test]
fn suite_verdicts() {
    let expected = [
        ("v3036", Status::NotFibred, "brown_rank1"),
        ("v1539", Status::Fibred, "brown_rank2"),
        ("v2943", Status::NotFibred, "brown_rank2"),
        ("v3379", Status::NotFibred, "brown_rank2"),
        ("v3384", Status::NotFibred, "alexander"),
        ("v3396", Status::NotFibred, "alexander"),
        ("s594_cover2", Status::Fibred, "cover"),
        ("v3093_cover5", Status::Fibred, "cover"),
    ];
    for (name, status, stage) in expected {
        let v = verdict(&suite::get(name).unwrap());
        assert_eq!((v.status, v.stage), (status, Some(stage)), "{name}");
    }
}

#[test]
fn fibred_verdicts_carry_verifying_certificates() {
    for p in suite::suite() {
        let v = verdict(&p);
        if v.status == Status::Fibred {
            let cert = v.certificate.as_ref().expect("certificate");
            assert!(verify_certificate(&p, cert), "{}", p.name);
        } else {
            assert!(v.certificate.is_none(), "{}", p.name);
        }
    }
}

#[test]
fn evidence_follows_the_cascade() {
    for p in suite::suite() {
        let v = verdict(&p);
        let pos: Vec<usize> =
            v.evidence.iter().map(|e| ORDER.iter().position(|s| *s == e.stage).expect("known stage")).collect();
        assert!(pos.windows(2).all(|w| w[0] <= w[1]), "{}: {pos:?}", p.name);
        // Later stages only corroborate, so the deciding one must be present.
        if let Some(stage) = v.stage {
            assert!(v.evidence.iter().any(|e| e.stage == stage), "{}", p.name);
        }
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let p = suite::get("s594_cover2").unwrap();
    let Some(Certificate::Cover { degree, cover, t, fiber_rank, subwords, side, descent, words }) =
        verdict(&p).certificate
    else {
        panic!("cover certificate expected");
    };
    let mut short = subwords.clone();
    short.pop();
    let bad = Certificate::Cover { degree, cover, t, fiber_rank, subwords: short, side, descent, words };
    assert!(!verify_certificate(&p, &bad));
}

#[test]
fn fillings_lose_at_most_one_betti_number() {
    let p = suite::get("v1539").unwrap();
    for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (5, 1), (5, 2), (1, 3), (-5, 1), (7, 3)] {
        let f = dehn_fill(&p, 0, a, b).unwrap();
        let drop = betti_drop(&p, &f);
        assert!((0..=1).contains(&drop), "({a},{b}) drops {drop}");
        assert!(!f.flags.hyperbolic && f.cusps.is_empty() && f.flags.closed);
    }
}

#[test]
fn filling_verdicts() {
    let p = suite::get("v1539").unwrap();
    for (a, b) in [(2, 1), (3, 1), (-5, 1)] {
        let v = verdict(&dehn_fill(&p, 0, a, b).unwrap());
        assert_eq!((v.status, v.stage), (Status::Fibred, Some("brown_quotient")), "({a},{b})");
        assert!(!v.caveats.is_empty());
    }
    for (a, b) in [(5, 2), (1, 3)] {
        let v = verdict(&dehn_fill(&p, 0, a, b).unwrap());
        assert_eq!((v.status, v.stage), (Status::NotFibred, Some("alexander")), "({a},{b})");
    }
    let f = dehn_fill(&p, 0, 5, 1).unwrap();
    assert_eq!(abelianization(&f).betti, 2);
}

#[test]
fn slope_sign_is_normalized() {
    let p = suite::get("v1539").unwrap();
    let a = dehn_fill(&p, 0, 2, 1).unwrap();
    let b = dehn_fill(&p, 0, -2, -1).unwrap();
    assert_eq!(a.relators, b.relators);
    assert_eq!(a.name, "v1539(2,1)");
}

#[test]
fn knot_flag_adds_annotation_only() {
    let p = suite::get("v3036").unwrap();
    let mut k = p.clone();
    k.flags.knot = true;
    let (a, b) = (verdict(&p), verdict(&k));
    assert_eq!((a.status, a.stage), (b.status, b.stage));
    assert!(a.annotations.is_empty());
    assert_eq!(b.annotations.len(), 1);
}

#[test]
fn cover_stage_finds_low_degree_fibrations() {
    for (gens, rels, degree) in [("xab", vec!["x2aX2B", "x2bX2BA"], 2), ("xabc", vec!["x3aX3B", "x3bX3C", "x3cX3BA"], 3)] {
        let p = Presentation::from_strs("g", gens, &rels);
        let v = verdict(&p);
        assert_eq!((v.status, v.stage), (Status::Fibred, Some("cover")), "{rels:?}");
        let cert = v.certificate.unwrap();
        match &cert {
            Certificate::Cover { degree: d, descent, .. } => assert!(*d == degree && *descent),
            other => panic!("unexpected {other:?}"),
        }
        assert!(verify_certificate(&p, &cert));
    }
}

#[test]
fn corank_of_suite_and_free_groups() {
    for p in suite::suite() {
        let r = corank_bounds(&p, &CorankOptions::default());
        assert_eq!((r.lower, r.upper), (1, 1), "{}", p.name);
    }
    let f3 = Presentation::from_strs("f3", "abc", &[]);
    let r = corank_bounds(&f3, &CorankOptions::default());
    assert_eq!((r.lower, r.upper), (3, 3));
    let z2 = Presentation::from_strs("z2", "ab", &["abAB"]);
    let r = corank_bounds(&z2, &CorankOptions::default());
    assert_eq!((r.lower, r.upper), (1, 1));
}

#[test]
fn batch_over_the_suite() {
    let (records, summary) = batch_records(suite::SUITE, &BatchOptions::default()).unwrap();
    assert_eq!((summary.total, summary.fibred, summary.not_fibred, summary.unknown, summary.errors), (8, 3, 5, 0, 0));
    assert_eq!(records.len(), 9);
    let names: Vec<&str> = records[..8].iter().map(|r| r["name"].as_str().unwrap()).collect();
    let expected: Vec<String> = suite::suite().into_iter().map(|p| p.name).collect();
    assert_eq!(names, expected);
}

#[test]
fn plots_are_written() {
    let dir = std::env::temp_dir().join(format!("flab-plot-{}", std::process::id()));
    let files = emit_plot(&suite::get("v3036").unwrap(), &dir).unwrap();
    assert!(!files.is_empty());
    for f in &files {
        let svg = std::fs::read_to_string(f).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
