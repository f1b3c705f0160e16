use multstrat::blowup::{self, Center};
use multstrat::cover;
use multstrat::equimult;
use multstrat::local::{self, PointedScheme};
use multstrat::oracle;
use multstrat::parse::parse_poly;
use multstrat::strata;
use multstrat::{Field, Ideal};

fn ideal(field: Field, vars: &[&str], gens: &[&str]) -> Ideal {
    let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    Ideal::new(field, vars.len(), gens.iter().map(|g| parse_poly(g, &names, field).unwrap()).collect())
}

#[test]
fn umbrella_end_to_end() {
    let j = ideal(Field::Rational, &["x", "y", "z"], &["x^2 - y^2*z"]);
    let x = PointedScheme::at_origin(j.clone());
    assert_eq!(local::multiplicity_at_point(&x).unwrap(), 2);
    let cone = local::tangent_cone_ideal(&x).unwrap();
    let cs = strata::cone_stratum(&cone, None).unwrap();
    assert_eq!((cs.stratum.dim(), cs.tau), (2, 1));

    let axis = Center::new(3, &[0, 1]).unwrap();
    let cert = blowup::validate_center(&x, &axis, 7, 10).unwrap();
    assert!(cert.equimult.equimultiple() && cert.multiplicity == 2);
    let dade = blowup::dade_check(&x, &axis, 7, 10).unwrap();
    assert!(dade.pass && dade.dropped);

    let cov = cover::build_cover(&j, Some(&[1, 2])).unwrap();
    let ci = cover::ci_approximation(&cov).unwrap();
    let l = cover::verify_locus_equality(&cov, &ci, 7, 10).unwrap();
    assert!(l.equal);
    assert_eq!(l.top_b.len(), 7);
}

#[test]
fn equimultiplicity_criteria_agree_on_planes() {
    let j = ideal(Field::Rational, &["x", "y", "z"], &["x*y*z"]);
    let x = PointedScheme::at_origin(j);
    for (cut, expect) in [(vec![0, 1], false), (vec![0, 1, 2], true)] {
        let c = Center::new(3, &cut).unwrap();
        let e = equimult::equimultiplicity_test(&x, &c).unwrap();
        let t = equimult::th211_check(&x, &c).unwrap();
        assert_eq!(e.equimultiple(), expect);
        assert_eq!(t.nilpotent_kernel, expect);
        assert!(e.agree && t.agree);
    }
}

#[test]
fn symbolic_and_oracle_lengths_match_over_gf3() {
    let f = Field::Prime(3);
    let j = ideal(f, &["x", "y", "z"], &["x^3 + y^3 - z^2*x"]);
    let x = PointedScheme::at_origin(j.clone());
    let sym = local::hilbert_samuel_function(&x, 7).unwrap();
    let orc = oracle::hs_prefix(j.gens(), &[f.zero(), f.zero(), f.zero()], 7).unwrap();
    assert_eq!(sym, orc);
}

#[test]
fn seeded_normalization_is_reproducible() {
    let j = ideal(Field::Rational, &["x", "y"], &["x*y"]);
    let a = multstrat::random::with_seed(11, || cover::build_cover(&j, None).unwrap());
    let b = multstrat::random::with_seed(11, || cover::build_cover(&j, None).unwrap());
    assert_eq!(a.min_polys, b.min_polys);
    assert!(a.generic_rank <= a.d_product);
}
