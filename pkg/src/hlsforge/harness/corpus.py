"""Embedded benchmark corpus: five linear-algebra kernels at desk scale
plus ten shipped buggy designs (one per seed error type).

Kernel problem sizes default to 32 and are overridable; loop/array counts
are structural and size-independent: atax 4/4, bicg 3/5, gemm 4/3,
gesummv 2/5, mvt 4/5.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from typing import Dict, List, Optional

from ..frontend import Ast, SourceUnit, parse

DEFAULT_SIZE = 32

_KERNEL_TEMPLATES = {
    "atax": """\
void atax(float A[{n}][{n}], float x[{n}], float y[{n}], float tmp[{n}]) {{
    init_y: for (int i = 0; i < {n}; i++) {{
        y[i] = 0.0;
    }}
    row: for (int i = 0; i < {n}; i++) {{
        tmp[i] = 0.0;
        col1: for (int j = 0; j < {n}; j++) {{
            tmp[i] = tmp[i] + A[i][j] * x[j];
        }}
        col2: for (int j = 0; j < {n}; j++) {{
            y[j] = y[j] + A[i][j] * tmp[i];
        }}
    }}
}}
""",
    "bicg": """\
void bicg(float A[{n}][{n}], float s[{n}], float q[{n}], float p[{n}], float r[{n}]) {{
    init_s: for (int i = 0; i < {n}; i++) {{
        s[i] = 0.0;
    }}
    row: for (int i = 0; i < {n}; i++) {{
        q[i] = 0.0;
        col: for (int j = 0; j < {n}; j++) {{
            s[j] = s[j] + r[i] * A[i][j];
            q[i] = q[i] + A[i][j] * p[j];
        }}
    }}
}}
""",
    "gemm": """\
void gemm(float C[{n}][{n}], float A[{n}][{n}], float B[{n}][{n}], float alpha, float beta) {{
    row: for (int i = 0; i < {n}; i++) {{
        scale: for (int j = 0; j < {n}; j++) {{
            C[i][j] = C[i][j] * beta;
        }}
        col: for (int j = 0; j < {n}; j++) {{
            dot: for (int k = 0; k < {n}; k++) {{
                C[i][j] = C[i][j] + alpha * A[i][k] * B[k][j];
            }}
        }}
    }}
}}
""",
    "gesummv": """\
void gesummv(float A[{n}][{n}], float B[{n}][{n}], float tmp[{n}], float x[{n}], float y[{n}], float alpha, float beta) {{
    row: for (int i = 0; i < {n}; i++) {{
        tmp[i] = 0.0;
        y[i] = 0.0;
        col: for (int j = 0; j < {n}; j++) {{
            tmp[i] = tmp[i] + A[i][j] * x[j];
            y[i] = y[i] + B[i][j] * x[j];
        }}
        y[i] = alpha * tmp[i] + beta * y[i];
    }}
}}
""",
    "mvt": """\
void mvt(float x1[{n}], float x2[{n}], float y1[{n}], float y2[{n}], float A[{n}][{n}]) {{
    r1: for (int i = 0; i < {n}; i++) {{
        c1: for (int j = 0; j < {n}; j++) {{
            x1[i] = x1[i] + A[i][j] * y1[j];
        }}
    }}
    r2: for (int i = 0; i < {n}; i++) {{
        c2: for (int j = 0; j < {n}; j++) {{
            x2[i] = x2[i] + A[j][i] * y2[j];
        }}
    }}
}}
""",
}

KERNEL_NAMES = tuple(_KERNEL_TEMPLATES)

# name -> (mnemonic, category); fin ships with a reference twin.
BUGGY_DESIGNS = {
    "daa": ("DAA", "vitis_style"),
    "aid": ("AID", "vitis_style"),
    "dpc": ("DPC", "vitis_style"),
    "mlp": ("MLP", "vitis_style"),
    "puc": ("PUC", "vitis_style"),
    "oob": ("OOB", "manual"),
    "ptr": ("PTR", "manual"),
    "udt": ("UDT", "manual"),
    "udm": ("UDM", "manual"),
    "fin": ("FIN", "manual"),
}


@dataclass(frozen=True)
class TestCase:
    id: str
    design_name: str
    mnemonic: Optional[str]
    category: str  # kernel | vitis_style | manual
    unit: SourceUnit
    reference: Optional[SourceUnit] = None


def kernel_source(name: str, size: int = DEFAULT_SIZE) -> SourceUnit:
    text = _KERNEL_TEMPLATES[name].format(n=size)
    return SourceUnit(name=name, text=text, origin="corpus")


def kernels(size: int = DEFAULT_SIZE) -> Dict[str, Ast]:
    return {name: parse(kernel_source(name, size)) for name in KERNEL_NAMES}


def _design_text(stem: str) -> str:
    ref = importlib.resources.files("hlsforge.harness") / "designs" / f"{stem}.c"
    return ref.read_text()


def buggy_designs() -> List[TestCase]:
    cases = []
    for stem, (mnemonic, category) in BUGGY_DESIGNS.items():
        unit = SourceUnit(name=stem, text=_design_text(stem), origin="corpus")
        reference = None
        if stem == "fin":
            reference = SourceUnit(name="fin_ref", text=_design_text("fin_ref"),
                                   origin="corpus")
        cases.append(TestCase(id=f"buggy-{stem}", design_name=stem,
                              mnemonic=mnemonic, category=category,
                              unit=unit, reference=reference))
    return cases


def corpus(size: int = DEFAULT_SIZE) -> List[TestCase]:
    """All embedded cases: five clean kernels + ten buggy designs."""
    cases = [TestCase(id=f"kernel-{name}", design_name=name, mnemonic=None,
                      category="kernel", unit=kernel_source(name, size))
             for name in KERNEL_NAMES]
    return cases + buggy_designs()
