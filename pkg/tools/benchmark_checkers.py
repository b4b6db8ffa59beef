import os
import sys

# Helper per i percorsi dinamici (gestisce l'esecuzione dalla radice o da tools/)
script_dir = os.path.dirname(os.path.abspath(__file__))
if os.path.basename(script_dir) in ["tools", "scripts"]:
    project_root = os.path.dirname(script_dir)
else:
    project_root = script_dir
sys.path.append(project_root)

from concept_stlc.benchmark import growth_ratios, run_benchmark
from concept_stlc.config import BENCHMARK_LIMITS, BENCHMARK_SIZES


def benchmark_checkers(csv_output=None, include_reference=True):
    """Misura i due controlli sulle dimensioni di BENCHMARK_SIZES e confronta i rapporti con le soglie."""
    sizes = [BENCHMARK_SIZES["small"], BENCHMARK_SIZES["large"]]
    print(f"[+] Controllo di concept sintetici con {', '.join(str(n) for n in sizes)} membri...")
    if include_reference:
        print("[+] Oracolo a liste incluso: la misura a 10000 membri può richiedere decine di secondi.")
    frame = run_benchmark(sizes, include_reference=include_reference)
    print(frame.to_string(index=False))

    ratios = growth_ratios(frame)
    ok = True
    largest = frame["efficient_s"].iloc[-1]
    if largest < BENCHMARK_LIMITS["efficient_max_seconds"]:
        print(f"[+] Controllo efficiente a {sizes[-1]} membri: {largest:.3f}s")
    else:
        print(f"[-] Controllo efficiente troppo lento: {largest:.3f}s (limite {BENCHMARK_LIMITS['efficient_max_seconds']}s)")
        ok = False
    if ratios["efficient_ratio"] <= BENCHMARK_LIMITS["efficient_max_ratio"]:
        print(f"[+] Rapporto efficiente: {ratios['efficient_ratio']:.1f}x (pendenza log-log {ratios['efficient_slope']:.2f})")
    else:
        print(f"[-] Rapporto efficiente {ratios['efficient_ratio']:.1f}x oltre il limite {BENCHMARK_LIMITS['efficient_max_ratio']}x")
        ok = False
    if "reference_ratio" in ratios:
        if ratios["reference_ratio"] >= BENCHMARK_LIMITS["reference_min_ratio"]:
            print(f"[+] Rapporto oracolo: {ratios['reference_ratio']:.1f}x (pendenza log-log {ratios['reference_slope']:.2f})")
        else:
            print(f"[-] Rapporto oracolo {ratios['reference_ratio']:.1f}x sotto la soglia {BENCHMARK_LIMITS['reference_min_ratio']}x")
            ok = False

    if csv_output:
        out_dir = os.path.dirname(csv_output)
        if out_dir and not os.path.exists(out_dir):
            os.makedirs(out_dir, exist_ok=True)
        frame.to_csv(csv_output, index=False)
        print(f"[+] Tempi salvati in: {os.path.abspath(csv_output)}")
    return ok


if __name__ == "__main__":
    csv_output = None
    include_reference = True

    args = sys.argv[1:]

    # Con --skip-reference si misura solo il controllo efficiente
    if "--skip-reference" in args:
        include_reference = False
        args.remove("--skip-reference")

    if len(args) > 0:
        csv_output = args[0]

    success = benchmark_checkers(csv_output, include_reference)
    if not success:
        sys.exit(1)
