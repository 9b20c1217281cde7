"""Named command lines for the acceptance-scale experiments.

Each entry maps a short name to CLI arguments. Scripts and the
reproducibility tests iterate over the same table.
"""

PRESETS: dict[str, list[str]] = {
    "c01-thmB-primes": ["thmB", "--family", "primes", "--f", "pow:2", "--g", "auto", "--window", "1e7"],
    "c02-digit-battery": ["digit", "--a-max", "50", "--window-exp", "24", "--banach-n", "1024"],
    "c03-kneser-4-1": ["kriz", "kneser", "--d", "4", "--k", "1"],
    "c03-kneser-5-1": ["kriz", "kneser", "--d", "5", "--k", "1"],
    "c04-witness": ["kriz", "witness", "--S", "1", "--m", "10", "--delta", "7/20"],
    "c05-eight-tuple": ["tuples", "--H", "0,2,6,8,12,18,20,26", "--r", "8", "--n-max", "100"],
    "c06-gowers-delta": ["chen", "gowers", "--function", "delta:0", "--N", "5", "--k", "2"],
    "c07-chen-sum": ["chen", "sum", "--N", "1e6"],
    "c07-recurrence-100": ["chen", "recurrence", "--n-max", "100", "--k", "1"],
    "c07-recurrence-subsets": [
        "chen", "recurrence", "--n-max", "1e5", "--k", "1", "--trials", "20", "--subset-density", "0.4",
    ],
    "c08-bohr-primes": ["bohr", "--family", "primes", "--prime-bound", "100"],
    "c08-bohr-sos": ["bohr", "--family", "sos", "--prime-bound", "50"],
    "c09-color-squares": [
        "color-gaps", "--family", "squares", "--f-indices", "16,10000,100000000", "--window", "1e6",
    ],
    "c10-assembly": ["kriz", "assemble", "--family", "naturals", "--delta", "1/4", "--rounds", "2"],
}
