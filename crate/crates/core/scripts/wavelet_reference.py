"""Two-level wavelet decompositions of a fixed signal from PyWavelets,
printed as Rust constants for tests/wavelet_reference.rs.

Mode names map as symmetric -> "symmetric", zero -> "zero",
periodic -> "periodization".
"""
import pywt

SIGNAL = [0.0, 1.0326530617130731, 1.3563491899653806, 3.4896280999466223,
          1.6049644504677154, -0.5523496830688595, 0.9852726827592373,
          0.9526421621270025, 2.5062000863830356, 8.15044170145305,
          10.970959796156368, 13.064504701631002, 16.963796724264846,
          16.85729508704806, 16.50056261224422, 19.86091272008499,
          21.66246681254605, 25.045588663288896, 32.50086914166341,
          37.10870928658981, 40.97182206708461]


def const(name, values):
    body = ", ".join(repr(float(v)) for v in values)
    return f"pub const {name}: [f64; {len(values)}] = [{body}];"


print(const("SIGNAL", SIGNAL))
for wav in ("db2", "sym4"):
    for mode, pymode in (("symmetric", "symmetric"), ("zero", "zero"), ("periodic", "periodization")):
        a2, d2, d1 = pywt.wavedec(SIGNAL, wav, mode=pymode, level=2)
        tag = f"{wav}_{mode}".upper()
        print(const(f"{tag}_A2", a2))
        print(const(f"{tag}_D2", d2))
        print(const(f"{tag}_D1", d1))
