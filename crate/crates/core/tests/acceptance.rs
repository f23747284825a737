//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use posetcat::block::{BlockMatrix, DimVector};
use posetcat::cone::{canonical_maps, cone, direct_sum, hat_candidates, hat_maps, shift};
use posetcat::field::{Field, PrimeField, Rationals};
use posetcat::homotopy::{cone_identity_contraction, cone_inclusion_null_homotopy, kappa_equiv, quotient_hom_dim};
use posetcat::linalg::DenseMatrix;
use posetcat::oracle;
use posetcat::poset::IndexSet;
use posetcat::problem::AnyProblem;
use posetcat::randgen::{random_commuting_square, random_index_set, random_morphism};
use posetcat::rep::{hom_basis, Morphism, Representation};
use posetcat::rng::SplitMix64;
use posetcat::tri::{fill_tr3, octahedron, rotate};

const SUITE_BUDGET: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:.2?}, limit {limit:?}");
    Ok(took)
}

/// Cones of 200 random morphisms over GF(5) are objects.
fn cone_validity() -> Outcome {
    let start = Instant::now();
    let f5 = gf(5);
    let mut rng = SplitMix64::new(101);
    for n in 0..200 {
        let t = common::morphism(&f5, 3, 4, &mut rng);
        let c = cone(&t);
        ensure!(Representation::new(c.dims(), c.matrix().clone()).is_ok(), "cone {n} is not an object");
        let expected: Vec<usize> = t.source().dims().dims().iter().zip(t.target().dims().dims()).map(|(a, b)| a + b).collect();
        ensure!(c.dims().dims() == expected.as_slice(), "cone {n} has wrong dims");
    }
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("200 cones valid in {took:.2?}"))
}

fn biproducts<F: Field>(field: &F, count: usize, seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    for n in 0..count {
        let idx = random_index_set(3, &mut rng);
        let b = common::object(field, &idx, 3, &mut rng);
        let c = common::object(field, &idx, 3, &mut rng);
        let s = direct_sum(&b, &c).map_err(|e| e.to_string())?;
        let ids = s.identities();
        ensure!(ids == [true; 5], "pair {n} over {:?}: identities {ids:?}", field.spec());
    }
    Ok(())
}

/// All five biproduct identities on 100 pairs over GF(5) and 20 over Q.
fn biproduct_identities() -> Outcome {
    biproducts(&gf(5), 100, 202)?;
    biproducts(&Rationals, 20, 203)?;
    Ok("120 pairs, 5 identities each".into())
}

/// The hat maps exist exactly for zero morphisms.
fn hat_maps_iff_zero() -> Outcome {
    let f5 = gf(5);
    let mut rng = SplitMix64::new(303);
    for n in 0..100 {
        let t = common::nonzero_morphism(&f5, 3, 3, &mut rng);
        ensure!(hat_maps(&t).is_none(), "nonzero T {n} has hat maps");
        let (iota_hat, _) = hat_candidates(&t);
        ensure!(Morphism::new(iota_hat, &shift(t.source()), &cone(&t)).is_err(), "ι̂ validates for nonzero T {n}");
    }
    for n in 0..100 {
        let idx = random_index_set(3, &mut rng);
        let b = common::object(&f5, &idx, 3, &mut rng);
        let c = common::object(&f5, &idx, 3, &mut rng);
        let z = b.zero_to(&c).unwrap();
        let hat = hat_maps(&z).ok_or(format!("zero morphism {n} lacks hat maps"))?;
        let canon = canonical_maps(&z);
        for m in [&hat.iota_hat, &hat.pi_hat, &canon.iota, &canon.pi] {
            ensure!(Morphism::new(m.matrix().clone(), m.source(), m.target()).is_ok(), "map for zero T {n} fails validation");
        }
    }
    Ok("100 nonzero rejected, 100 zero accepted".into())
}

/// Identity on the cone of an identity and `T·ι_C` are null-homotopic with
/// the explicit witnesses.
fn contractions() -> Outcome {
    let f5 = gf(5);
    let mut rng = SplitMix64::new(404);
    for n in 0..100 {
        let idx = random_index_set(3, &mut rng);
        let b = common::object(&f5, &idx, 3, &mut rng);
        let ct = cone(&b.identity());
        let k = cone_identity_contraction(&b);
        let zero = ct.zero_to(&ct).unwrap();
        ensure!(k.witnesses(&ct.identity(), &zero), "Id ≡ 0 witness fails for B {n}");
        // independent recomputation on flat matrices
        let (m, kd) = (ct.matrix().to_dense(), k.matrix().to_dense());
        ensure!((&(&m * &kd) + &(&kd * &m)).is_identity(), "flat check fails for B {n}");
    }
    for n in 0..100 {
        let t = common::morphism(&f5, 3, 3, &mut rng);
        let ti = t.compose(&canonical_maps(&t).iota).unwrap();
        let zero = ti.source().zero_to(ti.target()).unwrap();
        ensure!(cone_inclusion_null_homotopy(&t).witnesses(&ti, &zero), "T·ι ≡ 0 witness fails for T {n}");
        ensure!(kappa_equiv(&ti, &zero).unwrap().is_some(), "solver misses T·ι ≡ 0 for T {n}");
    }
    Ok("100 objects, 100 morphisms".into())
}

/// Solvers agree with exhaustive search over GF(2).
fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let f2 = gf(2);
    let mut rng = SplitMix64::new(505);
    let mut compared = 0;
    for n in 0..120 {
        let idx = random_index_set(2, &mut rng);
        let b = common::object(&f2, &idx, 2, &mut rng);
        let c = common::object(&f2, &idx, 2, &mut rng);
        let s = random_morphism(&b, &c, &mut rng);
        let t = random_morphism(&b, &c, &mut rng);
        let zero = b.zero_to(&c).unwrap();
        let (Some(hom), Some(quot), Some(eq), Some(eq0)) = (
            oracle::hom_dim(&b, &c),
            oracle::quotient_hom_dim(&b, &c),
            oracle::kappa_equiv(&s, &t),
            oracle::kappa_equiv(&s, &zero),
        ) else {
            continue;
        };
        ensure!(hom == hom_basis(&b, &c).unwrap().len(), "instance {n}: hom dim disagrees");
        ensure!(quot == quotient_hom_dim(&b, &c).unwrap(), "instance {n}: quotient dim disagrees");
        ensure!(eq == kappa_equiv(&s, &t).unwrap().is_some(), "instance {n}: S ≡ T disagrees");
        ensure!(eq0 == kappa_equiv(&s, &zero).unwrap().is_some(), "instance {n}: S ≡ 0 disagrees");
        compared += 1;
    }
    ensure!(compared >= 50, "only {compared} instances small enough to enumerate");
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("{compared} instances agree in {took:.2?}"))
}

/// Rotation certificates for 100 random morphisms over GF(5).
fn rotation() -> Outcome {
    let f5 = gf(5);
    let mut rng = SplitMix64::new(606);
    for n in 0..100 {
        let t = common::morphism(&f5, 3, 3, &mut rng);
        let rot = rotate(&t).map_err(|e| format!("T {n}: {e}"))?;
        ensure!(rot.iso.inverses.iter().zip(&rot.iso.maps).all(|(i, m)| i.verify(m)), "T {n}: inverse witness fails");
    }
    Ok("100 rotations certified".into())
}

/// Fill-ins for 100 squares commuting up to homotopy.
fn fill_in() -> Outcome {
    let f5 = gf(5);
    let mut rng = SplitMix64::new(707);
    let mut done = 0;
    while done < 100 {
        let idx = random_index_set(3, &mut rng);
        let Ok(sq) = random_commuting_square(&f5, &idx, 3, &mut rng) else { continue };
        fill_tr3(&sq.f, &sq.g, &sq.t, &sq.t2, &sq.k).map_err(|e| format!("square {done}: {e}"))?;
        done += 1;
    }
    Ok("100 squares filled".into())
}

/// Octahedra for 50 composable pairs over GF(5).
fn octahedra() -> Outcome {
    let start = Instant::now();
    let f5 = gf(5);
    let mut rng = SplitMix64::new(808);
    for n in 0..50 {
        let (s, t) = common::composable(&f5, 3, 3, &mut rng);
        let o = octahedron(&s, &t).map_err(|e| format!("pair {n}: {e}"))?;
        ensure!(o.lambda_inverse.verify(&o.lambda), "pair {n}: Λ inverse fails");
    }
    let took = within(Duration::from_secs(300), start)?;
    Ok(format!("50 octahedra in {took:.2?}"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// The non-abelian example: no nonzero maps from the `a3` object back, `T`
/// validates, and the kernel inclusion splits.
fn nonabelian_example() -> Outcome {
    let AnyProblem::Rational(p) = AnyProblem::load(fixture("nonabelian.json")).map_err(|e| e.to_string())? else {
        return Err("fixture is not over Q".into());
    };
    let (b12, c3) = (&p.objects["B12"], &p.objects["C3"]);
    ensure!(hom_basis(c3, b12).unwrap().is_empty(), "Hom(C3, B12) is nonzero");
    let t = &p.morphisms["T"];
    ensure!(Morphism::new(t.matrix().clone(), b12, c3).is_ok(), "T fails validation");
    let split = p.morphisms["incl"].compose(&p.morphisms["retr"]).unwrap();
    ensure!(split == p.objects["K1"].identity(), "inclusion followed by retraction is not the identity");

    // same data with a1 and a2 swapped by the involution
    let q = Rationals;
    let idx = Arc::new(IndexSet::new(&["a1", "a2", "a3"], &[("a1", "a2")]).unwrap());
    let zero_obj = |dims: Vec<usize>| {
        let d = DimVector::new(idx.clone(), dims).unwrap();
        Representation::new(&d, BlockMatrix::zero(&q, &d, &d).unwrap()).unwrap()
    };
    let (b, c) = (zero_obj(vec![1, 1, 0]), zero_obj(vec![0, 0, 1]));
    let tm = BlockMatrix::from_blocks(&q, b.dims(), c.dims(), [((1, 2), DenseMatrix::from_i64(&q, &[&[1]]))]).unwrap();
    ensure!(Morphism::new(tm, &b, &c).is_ok(), "T fails validation with the swap");
    ensure!(hom_basis(&c, &b).unwrap().is_empty(), "Hom(C3, B12) is nonzero with the swap");
    Ok("fixture and swapped variant".into())
}

/// The command-line fuzzer passes on the reference configuration.
fn cli_fuzz() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_posetcat"))
        .args(["fuzz", "--seed", "1", "--field", "gf5", "--max-dim", "3", "--max-indices", "3", "--trials", "25"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure!(out.status.code() == Some(0), "exit {:?}\n{text}", out.status.code());
    ensure!(text.lines().filter(|l| l.contains("PASS 25/25")).count() == 4, "unexpected report\n{text}");
    Ok("exit 0, all four axioms 25/25".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("cone validity", cone_validity),
        ("biproduct identities", biproduct_identities),
        ("hat maps iff T = 0", hat_maps_iff_zero),
        ("contractions", contractions),
        ("oracle agreement over GF(2)", oracle_agreement),
        ("TR2 rotation", rotation),
        ("TR3 fill-in", fill_in),
        ("TR4 octahedron", octahedra),
        ("non-abelian example", nonabelian_example),
        ("cli fuzz", cli_fuzz),
    ];
    let suite = Instant::now();
    let mut failures = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{:.2?}]", n + 1, start.elapsed()),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{:.2?}]", n + 1, start.elapsed());
            }
        }
    }
    let total = suite.elapsed();
    if total < SUITE_BUDGET {
        println!("suite PASS wall time {total:.2?}");
    } else {
        failures += 1;
        println!("suite FAIL wall time {total:.2?} over {SUITE_BUDGET:?}");
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
