//! Command-line frontend. Exit codes: 0 when the command succeeds or the
//! property holds, 1 when the property fails, 2 on invalid input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::block::BlockMatrix;
use crate::cone::{cone, direct_sum, standard_triangle, Triangle};
use crate::field::{Field, FieldSpec};
use crate::homotopy::{is_kappa_iso, kappa_equiv, null_homotopic_subspace};
use crate::problem::{blocks_to_json, AnyProblem, Problem, ProblemError};
use crate::rep::{hom_basis, Representation};
use crate::tri::{fill_tr3, octahedron, rotate, AxiomError};
use crate::verify::{verify_axioms, FuzzConfig};

#[derive(Debug, Parser)]
#[command(name = "posetcat", version, about = "Cones, homotopies and triangles for representations of posets with an involution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate every literal in a problem file.
    Check { file: PathBuf },
    /// Print the cone of a morphism.
    Cone { file: PathBuf, t: String },
    /// Print the direct sum of two objects and check the biproduct identities.
    Sum { file: PathBuf, b: String, c: String },
    /// Print the standard triangle of a morphism.
    Tri { file: PathBuf, t: String },
    /// Decide whether two morphisms are homotopic and print a witness.
    Equiv { file: PathBuf, s: String, t: String },
    /// Dimension of the space of morphisms between two objects.
    Hom {
        file: PathBuf,
        b: String,
        c: String,
        /// Also report the dimension modulo homotopy.
        #[arg(long)]
        quotient: bool,
        /// Print a basis.
        #[arg(long)]
        basis: bool,
    },
    /// Decide whether a morphism is invertible up to homotopy.
    Iso { file: PathBuf, t: String },
    /// Rotate the standard triangle of a morphism and certify the result.
    Rotate { file: PathBuf, t: String },
    /// Complete a square commuting up to the given κ-matrix to a map of cones.
    Fill {
        file: PathBuf,
        f: String,
        g: String,
        t: String,
        #[arg(value_name = "T'")]
        t2: String,
        k: String,
    },
    /// Build and certify the octahedron for a composable pair.
    Octa { file: PathBuf, s: String, t: String },
    /// Fuzz the triangulated-category axioms on random instances.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// `q` or `gfP` for a prime `P`.
        #[arg(long, default_value = "gf5", value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 3)]
        max_indices: usize,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        /// Cross-check solvers against exhaustive search where feasible.
        #[arg(long)]
        oracle: bool,
        /// Write the machine-readable summary here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    let lower = s.to_ascii_lowercase();
    if lower == "q" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = lower.strip_prefix("gf").ok_or_else(|| format!("expected q or gfP, got {s:?}"))?;
    let p: u64 = digits.parse().map_err(|_| format!("bad prime in {s:?}"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

enum Outcome {
    Holds,
    Fails,
}

fn emit(out: &mut dyn Write, value: &impl serde::Serialize) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(value).expect("json"))
}

fn object_json<F: Field>(o: &Representation<F>) -> serde_json::Value {
    let idx = o.dims().index_set();
    let dims: serde_json::Map<_, _> =
        o.dims().support().into_iter().map(|i| (idx.label(i).to_string(), json!(o.dims().dim(i)))).collect();
    json!({ "dims": dims, "blocks": blocks_to_json(o.matrix()) })
}

fn matrix_json<F: Field>(m: &BlockMatrix<F>) -> serde_json::Value {
    json!(blocks_to_json(m))
}

fn triangle_problem<F: Field>(p: &Problem<F>, t: &Triangle<F>) -> Problem<F> {
    let mut q = Problem::new(&p.field, &p.index_set);
    for (name, o) in [("X", &t.x), ("Y", &t.y), ("Z", &t.z)] {
        if !q.objects.values().any(|x| x == o) {
            q.add_object(name, o);
        }
    }
    q.add_object("[X]", t.w.target());
    q.add_morphism("u", &t.u);
    q.add_morphism("v", &t.v);
    q.add_morphism("w", &t.w);
    q
}

fn exec<F: Field>(p: &Problem<F>, cmd: &Command, out: &mut dyn Write) -> Result<Outcome, ProblemError> {
    let io = |e: std::io::Error| ProblemError::Io { path: "<stdout>".into(), source: e };
    match cmd {
        Command::Check { .. } => {
            writeln!(out, "ok: {} objects, {} morphisms, {} κ-matrices", p.objects.len(), p.morphisms.len(), p.kappa.len())
                .map_err(io)?;
        }
        Command::Cone { t, .. } => emit(out, &object_json(&cone(p.morphism(t)?))).map_err(io)?,
        Command::Sum { b, c, .. } => {
            let s = direct_sum(p.object(b)?, p.object(c)?).map_err(|e| ProblemError::Validation {
                name: format!("{b} ⊕ {c}"),
                condition: e.to_string(),
            })?;
            let ids = s.identities();
            emit(out, &json!({
                "object": object_json(&s.object),
                "iota_hat_b": matrix_json(s.iota_hat_b.matrix()),
                "iota_c": matrix_json(s.iota_c.matrix()),
                "pi_b": matrix_json(s.pi_b.matrix()),
                "pi_hat_c": matrix_json(s.pi_hat_c.matrix()),
            }))
            .map_err(io)?;
            let n = ids.iter().filter(|&&x| x).count();
            writeln!(out, "biproduct identities: {n}/5 hold").map_err(io)?;
            if n != 5 {
                return Ok(Outcome::Fails);
            }
        }
        Command::Tri { t, .. } => {
            let tri = standard_triangle(p.morphism(t)?);
            writeln!(out, "{}", triangle_problem(p, &tri).to_json()).map_err(io)?;
        }
        Command::Equiv { s, t, .. } => {
            let (s, t) = (p.morphism(s)?, p.morphism(t)?);
            let k = kappa_equiv(s, t).map_err(|e| ProblemError::Validation { name: "equiv".into(), condition: e.to_string() })?;
            match k {
                Some(k) => {
                    writeln!(out, "EQUIVALENT").map_err(io)?;
                    emit(out, &json!({ "K": matrix_json(k.matrix()) })).map_err(io)?;
                }
                None => {
                    writeln!(out, "NOT-EQUIVALENT").map_err(io)?;
                    return Ok(Outcome::Fails);
                }
            }
        }
        Command::Hom { b, c, quotient, basis, .. } => {
            let (bo, co) = (p.object(b)?, p.object(c)?);
            let invalid = |e: crate::rep::MorphismError| ProblemError::Validation { name: "hom".into(), condition: e.to_string() };
            let homs = hom_basis(bo, co).map_err(invalid)?;
            writeln!(out, "dim Hom_s = {}", homs.len()).map_err(io)?;
            if *quotient {
                let null = null_homotopic_subspace(bo, co).map_err(invalid)?;
                writeln!(out, "dim Hom_kappa = {}", homs.len() - null.len()).map_err(io)?;
            }
            if *basis {
                let list: Vec<_> = homs.iter().map(|m| matrix_json(m.matrix())).collect();
                emit(out, &list).map_err(io)?;
            }
        }
        Command::Iso { t, .. } => match is_kappa_iso(p.morphism(t)?) {
            Some(iso) => {
                writeln!(out, "KAPPA-ISO").map_err(io)?;
                emit(out, &json!({
                    "inverse": matrix_json(iso.inverse.matrix()),
                    "K_source": matrix_json(iso.k_source.matrix()),
                    "K_target": matrix_json(iso.k_target.matrix()),
                }))
                .map_err(io)?;
            }
            None => {
                writeln!(out, "NOT-ISO").map_err(io)?;
                return Ok(Outcome::Fails);
            }
        },
        Command::Rotate { t, .. } => match rotate(p.morphism(t)?) {
            Ok(rot) => {
                writeln!(out, "ROTATION-CERTIFIED").map_err(io)?;
                let mut q = triangle_problem(p, &rot.triangle);
                q.add_morphism("S", &rot.s);
                q.add_morphism("R", &rot.r);
                q.add_kappa("K_SR", &rot.k_sr);
                q.add_kappa("K_square", &rot.k_square);
                writeln!(out, "{}", q.to_json()).map_err(io)?;
            }
            Err(e) => {
                writeln!(out, "FAILED: {e}").map_err(io)?;
                return Ok(Outcome::Fails);
            }
        },
        Command::Fill { f, g, t, t2, k, .. } => {
            let (f, g, t, t2, k) = (p.morphism(f)?, p.morphism(g)?, p.morphism(t)?, p.morphism(t2)?, p.kappa_matrix(k)?);
            match fill_tr3(f, g, t, t2, k) {
                Err(AxiomError::Mismatch) => {
                    return Err(ProblemError::Validation { name: "fill".into(), condition: AxiomError::Mismatch.to_string() })
                }
                Ok(h) => {
                    writeln!(out, "FILLED").map_err(io)?;
                    emit(out, &json!({ "H": matrix_json(h.matrix()) })).map_err(io)?;
                }
                Err(e) => {
                    writeln!(out, "FAILED: {e}").map_err(io)?;
                    return Ok(Outcome::Fails);
                }
            }
        }
        Command::Octa { s, t, .. } => {
            let (s, t) = (p.morphism(s)?, p.morphism(t)?);
            if s.target() != t.source() {
                return Err(ProblemError::Validation { name: "octa".into(), condition: "morphisms are not composable".into() });
            }
            match octahedron(s, t) {
                Ok(o) => {
                    writeln!(out, "OCTAHEDRON-CERTIFIED").map_err(io)?;
                    emit(out, &json!({
                        "F": matrix_json(o.f.matrix()),
                        "G": matrix_json(o.g.matrix()),
                        "Lambda": matrix_json(o.lambda.matrix()),
                        "Lambda_inverse": matrix_json(o.lambda_inverse.inverse.matrix()),
                        "K": matrix_json(o.lambda_witness.matrix()),
                    }))
                    .map_err(io)?;
                }
                Err(e) => {
                    writeln!(out, "FAILED: {e}").map_err(io)?;
                    return Ok(Outcome::Fails);
                }
            }
        }
        Command::Fuzz { .. } => unreachable!("fuzz takes no problem file"),
    }
    Ok(Outcome::Holds)
}

fn file_of(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Check { file }
        | Command::Cone { file, .. }
        | Command::Sum { file, .. }
        | Command::Tri { file, .. }
        | Command::Equiv { file, .. }
        | Command::Hom { file, .. }
        | Command::Iso { file, .. }
        | Command::Rotate { file, .. }
        | Command::Fill { file, .. }
        | Command::Octa { file, .. } => Some(file),
        Command::Fuzz { .. } => None,
    }
}

/// Run a parsed command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Command::Fuzz { seed, field, max_dim, max_indices, trials, oracle, json } = &cli.command {
        let cfg = FuzzConfig {
            seed: *seed,
            field: *field,
            max_indices: *max_indices,
            max_dim: *max_dim,
            trials: *trials,
            oracle: *oracle,
        };
        let report = verify_axioms(&cfg);
        let _ = write!(out, "{}", report.to_text());
        if let Some(path) = json {
            if let Err(e) = std::fs::write(path, report.to_json()) {
                let _ = writeln!(err, "cannot write {}: {e}", path.display());
                return 2;
            }
        }
        return if report.all_passed() { 0 } else { 1 };
    }
    let path = file_of(&cli.command).expect("every other command reads a file");
    let result = AnyProblem::load(path).and_then(|problem| match &problem {
        AnyProblem::Rational(p) => exec(p, &cli.command, out),
        AnyProblem::Prime(p) => exec(p, &cli.command, out),
    });
    match result {
        Ok(Outcome::Holds) => 0,
        Ok(Outcome::Fails) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
