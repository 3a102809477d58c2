use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use terai::arith::{jacobi, JacobiValue};
use terai::descent::{a_sum_congruence, descent_trace, scan_cases, TraceVerdict};
use terai::gaussint::TwoSquares;
use terai::oracles::{cohn_report, cohn_search, consecutive_square_root, corollary_c_search};
use terai::sieve::{parity_certificate, SYMBOLS};
use terai::solver::find_solutions;
use terai::triples::{instance, scan_instances, TeraiInstance};

type Check = Result<String, String>;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn small(inst: &TeraiInstance) -> (u64, u64) {
    (inst.m.to_u64().unwrap(), inst.n.to_u64().unwrap())
}

fn theorem_confirmation() -> Check {
    let listed: Vec<(u64, u64)> = scan_instances(10).iter().map(small).collect();
    let want = vec![(5, 2), (6, 1), (9, 2), (10, 3), (10, 7)];
    if listed != want {
        return Err(format!("scan m <= 10 gave {listed:?}"));
    }
    let instances = scan_instances(40);
    for inst in &instances {
        let sols = find_solutions(&inst.b, &inst.c, 40, 40).map_err(|e| e.to_string())?;
        let got: Vec<(BigUint, u32, u32)> = sols.into_iter().map(|s| (s.x, s.y, s.z)).collect();
        if got != vec![(inst.a.clone(), 2, 2)] {
            return Err(format!("(m,n)={:?}: {got:?}", small(inst)));
        }
    }
    Ok(format!("{} instances, each with exactly (2mn, 2, 2)", instances.len()))
}

fn parity_certificates() -> Check {
    let instances = scan_instances(200);
    for inst in &instances {
        let cert = parity_certificate(inst);
        let expected: Vec<JacobiValue> = SYMBOLS.iter().map(|(_, v)| *v).collect();
        if !cert.valid || cert.symbols().to_vec() != expected {
            return Err(format!("(m,n)={:?}: {:?}", small(inst), cert.symbols()));
        }
    }
    Ok(format!("{} instances, symbols (+1,-1,-1,-1,-1)", instances.len()))
}

fn case_analysis() -> Check {
    let instances = scan_instances(40);
    let mut cells = 0;
    for inst in &instances {
        let rows = scan_cases(inst, 15, 15);
        if rows.len() != 64 {
            return Err(format!("(m,n)={:?}: {} cells", small(inst), rows.len()));
        }
        for row in rows {
            cells += 1;
            if row.r % 2 == 0 || row.k % 2 == 0 {
                return Err(format!("even cell ({}, {})", row.r, row.k));
            }
            if row.case_a_holds {
                return Err(format!("(m,n)={:?}: case A at ({}, {})", small(inst), row.r, row.k));
            }
            if row.case_b_holds != (row.r == 1 && row.k == 1) {
                return Err(format!("(m,n)={:?}: case B = {} at ({}, {})", small(inst), row.case_b_holds, row.r, row.k));
            }
        }
    }
    Ok(format!("{cells} cells, case A never, case B only at (1,1)"))
}

fn cohn_oracle() -> Check {
    let hits = cohn_search(10, 1000, true).map_err(|e| e.to_string())?;
    let got: BTreeSet<(u64, u64, u32)> = hits.iter().map(|h| (h.y.to_u64().unwrap(), h.z, h.k)).collect();
    let mut want: BTreeSet<(u64, u64, u32)> = (3..=10).map(|k| (1, 1, k)).collect();
    want.insert((239, 13, 4));
    if got != want {
        return Err(format!("hits {got:?}"));
    }
    let report = cohn_report(10, 1000).map_err(|e| e.to_string())?;
    if !report.as_expected() {
        return Err(format!("unexpected {:?}", report.unexpected));
    }
    Ok("trivial family plus (239, 13, 4)".into())
}

fn descent_replay() -> Check {
    let instances = scan_instances(40);
    for inst in &instances {
        let id = small(inst);
        let t = descent_trace(inst, &inst.a, 2, 2).map_err(|e| format!("{id:?}: {e}"))?;
        if t.verdict != TraceVerdict::TheoremConsistent {
            return Err(format!("{id:?}: {}", t.verdict));
        }
        if t.t1_t2() != Some((1, 1)) {
            return Err(format!("{id:?}: t1,t2 = {:?}", t.t1_t2()));
        }
        if t.survivors.len() != 1 {
            return Err(format!("{id:?}: {} survivors", t.survivors.len()));
        }
        let (dec, _) = t.chosen.as_ref().ok_or(format!("{id:?}: no decomposition"))?;
        if &dec.g * &dec.h != inst.mn() {
            return Err(format!("{id:?}: gh = {}", &dec.g * &dec.h));
        }
        let (p, q) = t.pq.as_ref().ok_or(format!("{id:?}: no P, Q"))?;
        if p.magnitude() != &inst.p || q.magnitude() != &inst.q {
            return Err(format!("{id:?}: |P|,|Q| = {p}, {q}"));
        }
    }
    Ok(format!("{} traces consistent", instances.len()))
}

fn a_congruence() -> Check {
    let worked = instance(5, 2).unwrap();
    let dec = TwoSquares {
        g: big(5),
        h: big(2),
        n: big(29),
    };
    let w = a_sum_congruence(&worked, &dec, 3).map_err(|e| e.to_string())?;
    if w.a_value != BigInt::from(-759) || w.a_mod_b != big(21 - 3) || w.sign != Some(-1) {
        return Err(format!("(5,2), k=3: A = {} mod 21 = {}", w.a_value, w.a_mod_b));
    }
    let instances = scan_instances(20);
    let mut checked = 0;
    for inst in &instances {
        for d in terai::gaussint::two_square_decompositions(&inst.c) {
            if &d.g * &d.h != inst.mn() {
                continue;
            }
            for k in [1, 3, 5, 7] {
                let r = a_sum_congruence(inst, &d, k).map_err(|e| e.to_string())?;
                let b = BigInt::from(inst.b.clone());
                let rhs = BigInt::from(k) * BigInt::from(2).pow(k - 1) * BigInt::from(inst.mn()).pow(k - 1);
                let a = &r.a_value;
                if !((a - &rhs).is_multiple_of(&b) || (a + &rhs).is_multiple_of(&b)) || !r.match_up_to_sign {
                    return Err(format!("(m,n)={:?}, k={k}: A = {a}", small(inst)));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("A = -759 = -3 (mod 21); {checked} further congruences hold"))
}

fn corollary_window() -> Check {
    let hits = corollary_c_search(500, &[3, 5, 7, 9, 11]).map_err(|e| e.to_string())?;
    if !hits.is_empty() {
        return Err(format!("hits {hits:?}"));
    }
    let control = big(13).pow(4);
    if consecutive_square_root(&control) != Some(big(119)) || &big(119).pow(2) + big(120).pow(2) != control {
        return Err("13^4 control not detected".into());
    }
    Ok("empty window; 13^4 = 119^2 + 120^2 detected".into())
}

fn residue_jacobi(a: u64, n: u64) -> i8 {
    let mut result = 1i8;
    let mut rest = n;
    let mut p = 3;
    while rest > 1 {
        while rest % p == 0 {
            rest /= p;
            let squares: HashSet<u64> = (0..p).map(|t| t * t % p).collect();
            let r = a % p;
            result *= if r == 0 {
                0
            } else if squares.contains(&r) {
                1
            } else {
                -1
            };
        }
        p += 2;
    }
    result
}

fn double_loop(b: u64, c: u64, bound: u32) -> Vec<(BigUint, u32, u32)> {
    let mut out = Vec::new();
    for z in 1..=bound {
        let cz = big(c).pow(z);
        for y in 1..=bound {
            let by = big(b).pow(y);
            if by < cz {
                let d = &cz - &by;
                let s = d.sqrt();
                if &s * &s == d {
                    out.push((s, y, z));
                }
            }
        }
    }
    out.sort_by_key(|s| (s.2, s.1));
    out
}

fn oracle_cross_check() -> Check {
    let mut symbols = 0;
    for n in (1..=201u64).step_by(2) {
        for a in 0..n {
            let got = jacobi(&BigInt::from(a), &big(n)).map_err(|e| e.to_string())?.as_i8();
            if got != residue_jacobi(a, n) {
                return Err(format!("({a}/{n}) = {got}"));
            }
            symbols += 1;
        }
    }
    let mut pairs = 0;
    for b in 2..=100u64 {
        for c in 2..=100u64 {
            if b.gcd(&c) != 1 {
                continue;
            }
            let got: Vec<(BigUint, u32, u32)> = find_solutions(&big(b), &big(c), 12, 12)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|s| (s.x, s.y, s.z))
                .collect();
            if got != double_loop(b, c, 12) {
                return Err(format!("b={b} c={c}: {got:?}"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{symbols} symbols and {pairs} (b,c) pairs agree"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("theorem confirmation", theorem_confirmation),
        ("parity certificates", parity_certificates),
        ("case analysis", case_analysis),
        ("cohn oracle", cohn_oracle),
        ("descent replay", descent_replay),
        ("a-congruence", a_congruence),
        ("corollary window", corollary_window),
        ("oracle cross-check", oracle_cross_check),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {} {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
