"""Independent high-precision evaluation of the shift-variance lower bound
at the default detector configuration. The printed value is frozen into
the CRLB integration test as GOLDEN_VARIANCE_HZ2.

    var >= (pi*D / (4*X^2)) * (a*G + g)^3 / snr^2 * (1 + 2*I)^2 / (a^2 * I^2)
"""
from mpmath import mp, mpf, pi

mp.dps = 50

pixel = mpf("6.5e-6")        # m
width = mpf("16.6e-3")       # m
n_pixels = 120
bandwidth = mpf("60e9")      # Hz
alpha = n_pixels * pixel / bandwidth  # m/Hz
fwhm = mpf("1e9")            # Hz
gamma_m = mpf(0)             # response FWHM, already in metres
rel = mpf("0.1")
snr = mpf(1)

var = (pi * pixel / (4 * width**2)) * (alpha * fwhm + gamma_m) ** 3 / snr**2 \
    * (1 + 2 * rel) ** 2 / (alpha**2 * rel**2)
print(mp.nstr(var, 30))
print(mp.nstr(mp.sqrt(var), 30))
