"""
Spectral stability of viscous shock profiles of the 1-D compressible Navier-Stokes equations
for an ideal polytropic gas.

The toolkit solves the rescaled traveling-wave profile, builds the first-order eigenvalue system,
computes the Evans function on semicircular contours (exterior-product and polar-coordinate
methods, Kato-initialized), and counts unstable eigenvalues by winding number.  High-frequency
radii come either from the rigorous tracking bound or from the fitted Ce^{alpha sqrt(lambda)}
approximant.

Commands:

    endstates   print the Rankine-Hugoniot endstates and Mach number
    profile     solve and export the shock profile
    bound       tracking bound, high-frequency fit and practical radius
    winding     Evans contour and winding number for one parameter point
    sweep       run a parameter grid with a resumable journal
    plot        render SVG figures from a finished sweep

Usage:  shock_evans winding --gamma 0.6667 --nu 1 --vplus 0.5 --radius 10
"""

__version__ = '0.1.0'
