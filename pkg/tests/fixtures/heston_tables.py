# Coefficient tables for the Heston unconditional central moments (orders 2-4).
# Row = (i1..i6, numerator, denominator): e^{-i1 kt} t^i2 k^{-i3} theta^i4 sigma_v^i5 rho^i6.

CMOM2 = [
    (0, 0, 3, 1, 2, 0, -1, 4),
    (1, 0, 3, 1, 2, 0, 1, 4),
    (0, 0, 2, 1, 1, 1, 1, 1),
    (1, 0, 2, 1, 1, 1, -1, 1),
    (0, 1, 1, 1, 1, 1, -1, 1),
    (0, 1, 2, 1, 2, 0, 1, 4),
    (0, 1, 0, 1, 0, 0, 1, 1),
]

CMOM3 = [
    (0, 0, 5, 1, 4, 0, 3, 4),
    (1, 0, 5, 1, 4, 0, -3, 4),
    (1, 1, 3, 1, 3, 1, 9, 4),
    (1, 1, 4, 1, 4, 0, -3, 8),
    (1, 0, 3, 1, 2, 2, -6, 1),
    (1, 0, 4, 1, 3, 1, 9, 2),
    (0, 0, 3, 1, 2, 2, 6, 1),
    (0, 0, 4, 1, 3, 1, -9, 2),
    (1, 0, 3, 1, 2, 0, -3, 2),
    (0, 0, 3, 1, 2, 0, 3, 2),
    (1, 1, 2, 1, 2, 2, -3, 1),
    (0, 1, 2, 1, 2, 2, -3, 1),
    (0, 1, 3, 1, 3, 1, 9, 4),
    (0, 1, 4, 1, 4, 0, -3, 8),
    (0, 1, 1, 1, 1, 1, 3, 1),
    (0, 1, 2, 1, 2, 0, -3, 2),
    (1, 0, 2, 1, 1, 1, 3, 1),
    (0, 0, 2, 1, 1, 1, -3, 1),
]

CMOM4 = [
    (0, 0, 6, 2, 4, 0, 3, 16),
    (1, 0, 6, 2, 4, 0, -3, 8),
    (2, 0, 6, 2, 4, 0, 3, 16),
    (1, 1, 4, 2, 3, 1, -3, 1),
    (1, 1, 5, 2, 4, 0, 3, 8),
    (1, 0, 4, 2, 2, 2, -6, 1),
    (1, 0, 5, 2, 3, 1, 3, 1),
    (2, 0, 4, 2, 2, 2, 3, 1),
    (2, 0, 5, 2, 3, 1, -3, 2),
    (0, 0, 4, 2, 2, 2, 3, 1),
    (0, 0, 5, 2, 3, 1, -3, 2),
    (1, 1, 3, 2, 2, 2, 6, 1),
    (1, 1, 3, 2, 2, 0, 3, 2),
    (0, 1, 3, 2, 2, 2, -6, 1),
    (0, 1, 4, 2, 3, 1, 3, 1),
    (0, 1, 5, 2, 4, 0, -3, 8),
    (0, 1, 2, 2, 1, 1, 6, 1),
    (0, 1, 3, 2, 2, 0, -3, 2),
    (1, 1, 2, 2, 1, 1, -6, 1),
    (0, 0, 7, 1, 6, 0, -87, 32),
    (1, 0, 7, 1, 6, 0, 21, 8),
    (2, 0, 7, 1, 6, 0, 3, 32),
    (1, 1, 5, 1, 5, 1, -15, 1),
    (1, 1, 6, 1, 6, 0, 15, 8),
    (1, 0, 5, 1, 4, 2, 51, 1),
    (1, 0, 6, 1, 5, 1, -21, 1),
    (2, 0, 5, 1, 4, 2, 3, 2),
    (2, 0, 6, 1, 5, 1, -3, 4),
    (0, 0, 5, 1, 4, 2, -105, 2),
    (0, 0, 6, 1, 5, 1, 87, 4),
    (1, 0, 5, 1, 4, 0, 9, 1),
    (0, 0, 5, 1, 4, 0, -9, 1),
    (1, 1, 4, 1, 4, 2, 36, 1),
    (1, 2, 3, 1, 4, 2, 15, 2),
    (1, 2, 4, 1, 5, 1, -3, 1),
    (1, 2, 5, 1, 6, 0, 3, 8),
    (1, 1, 4, 1, 4, 0, 9, 2),
    (1, 1, 3, 1, 3, 3, -24, 1),
    (1, 0, 4, 1, 3, 3, -36, 1),
    (0, 0, 4, 1, 3, 3, 36, 1),
    (1, 1, 3, 1, 3, 1, -18, 1),
    (1, 0, 4, 1, 3, 1, -36, 1),
    (0, 0, 4, 1, 3, 1, 36, 1),
    (1, 2, 2, 1, 3, 3, -6, 1),
    (0, 2, 2, 2, 2, 2, 3, 1),
    (0, 2, 3, 2, 3, 1, -3, 2),
    (0, 2, 4, 2, 4, 0, 3, 16),
    (0, 1, 3, 1, 3, 3, -12, 1),
    (0, 1, 4, 1, 4, 2, 18, 1),
    (0, 1, 5, 1, 5, 1, -15, 2),
    (0, 1, 6, 1, 6, 0, 15, 16),
    (0, 0, 3, 1, 2, 2, -24, 1),
    (1, 0, 3, 1, 2, 2, 24, 1),
    (0, 2, 1, 2, 1, 1, -6, 1),
    (0, 2, 2, 2, 2, 0, 3, 2),
    (0, 1, 2, 1, 2, 2, 12, 1),
    (0, 1, 3, 1, 3, 1, -18, 1),
    (0, 1, 4, 1, 4, 0, 9, 2),
    (1, 1, 2, 1, 2, 2, 12, 1),
    (0, 0, 3, 1, 2, 0, -3, 1),
    (1, 0, 3, 1, 2, 0, 3, 1),
    (0, 2, 0, 2, 0, 0, 3, 1),
    (0, 1, 2, 1, 2, 0, 3, 1),
]
