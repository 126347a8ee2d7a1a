"""Values produced by ``tests/oracle/derive_values.py`` (mpmath, 30 digits).

Parameters throughout: gamma = 1.4, a_inf = 0.5; left state (1.01, 0.02)
unless stated otherwise.  Keys are ``tau``.
"""

UL = (1.01, 0.02)
UR = (0.99, -0.01)

FLUX_G_1_01 = {0.0: (1.0, 0.1), 0.1: (0.99994999874993749609, 0.1)}

# Phi_k(0.01; UL): (rho, v)
RAREFACTION = {
    (1, 0.0): (1.0058070134211925799, 0.028333333333333333333),
    (2, 0.0): (1.0142069586399682559, 0.028333333333333333333),
    (1, 0.1): (1.0060540594852176195, 0.02768625099606655691),
    (2, 0.1): (1.0139494933557918839, 0.027661370968127393431),
}

# Phi_k(-0.02; UL): (rho, v, s)
SHOCK = {
    (1, 0.0): (1.0184279436946777481, 0.0033333410059789963025, -1.9939896352487709989),
    (2, 0.0): (1.0016279448012372183, 0.0033333410315462501643, 2.0139896444713405816),
    (1, 0.1): (1.0179220484163100358, 0.0046455068988393966537, -2.0354930214131079049),
    (2, 0.1): (1.0021309551503503576, 0.0046590944520538293112, 2.0571847148401056064),
}

# solve_interior(UL, UR): (alpha_1, alpha_2)
INTERIOR = {
    0.0: (0.0060003186383598621335, -0.042000404435788318542),
    0.1: (0.0059786631332520409995, -0.045061143520157181551),
}

# solve_boundary((1, 0), theta=-0.05)
BOUNDARY = {0.0: -0.060050299434424435213, 0.1: -0.065259151176665409551}

# d alpha_1 / d omega at the background, straight wall
DALPHA_DOMEGA = {0.0: 1.2, 0.1: 1.3020833333333333333}

# reflected 1-strength over incoming 2-strength, alpha_2 = 1e-5
REFLECTION_RATIO = {0.0: 1.0, 0.1: 1.00000015676730053}

# s[E] - [Q] for the 1-shock of strength -0.02 from the background, tau = 0;
# its sign fixes the orientation of the entropy inequality
ENTROPY_PRODUCTION = 9.3366542603994309676e-7
