"""Linearization conditions and target formulas in the package grammar.

Every condition is stored as ``(id, label, residual)`` where the residual is
the left side minus the right side of the defining equation.
"""

CONDITIONS_I = [
    ("T1.C1", "45", "A0_y - A1_x"),
    ("T1.C2", "46", "4*B0 - 3*A1"),
    ("T1.C3", "47", "12*A1_y + 3*A1^2 - 8*C2"),
    ("T1.C4", "48", "12*A1_x + 3*A0*A1 - 4*C1"),
    ("T1.C5", "49", "32*C0_y + 12*A0_x*A1 - 16*C1_x + 3*A0^2*A1 - 4*A0*C1"),
    ("T1.C6", "50", "4*C2_y + A1*C2 - 24*D4"),
    ("T1.C7", "51", "4*C1_y + A1*C1 - 12*D3"),
    ("T1.C8", "52", "16*C1_x - 12*A0_x*A1 - 3*A0^2*A1 + 4*A0*C1 + 8*A1*C0 - 32*D2"),
    ("T1.C9", "53",
     "192*D2_x + 36*A0_x*A0*A1 - 48*A0_x*C1 - 48*C0_x*A1 - 288*D1_y + 9*A0^3*A1"
     " - 12*A0^2*C1 - 36*A0*A1*C0 + 48*A0*D2 + 32*C0*C1"),
    ("T1.C10", "54",
     "384*D1_xy - (3*((3*A0*A1 - 4*C1)*A0^2 + 16*(2*A1*D1 + C0*C1)"
     " - 16*(A1*C0 - D2)*A0)*A0"
     " - 32*(4*(C1*D1 - 2*C2*D0 + C0*D2) + (3*A1*D0 - C0^2)*A1)"
     " - 96*D1_y*A0 + 384*D0_y*A1 + 1536*D0_yy"
     " - 16*(3*A0*A1 - 4*C1)*C0_x"
     " + 12*((3*A0*A1 - 4*C1)*A0 - 4*(A1*C0 - 4*D2))*A0_x)"),
]

CONDITIONS_II = [
    ("T2.C1", "64", "10*r_yy + (F1_y - F2_x - F2_y*r - r_y*F2)"),
    ("T2.C2", "65", "10*r_x - (10*r_y*r - F0 + F1*r - F2*r^2)"),
    ("T2.C3", "67", "H2 + 3*F2"),
    ("T2.C4", "68", "4*H1 + 3*(5*F1 - 2*F2*r)"),
    ("T2.C5", "69", "4*H0 + 3*(6*F0 - F1*r)"),
    ("T2.C6", "70",
     "10*F1_yy + (F1_y*F2 - 40*F2_xy - 16*F2_x*F2 + 20*F2_yy*r + 40*F2_y*r_y"
     " + 14*F2_y*F2*r + 20*J4_x - 20*J4_y*r + 14*r_y*F2^2 - 40*r_y*J4)"),
    ("T2.C7", "71", "12*F2_x - (12*F2_y*r - 3*F1*F2 + 6*F2^2*r + 4*J3 - 16*J4*r)"),
    ("T2.C8", "72",
     "60*F1_x - (60*F1_y*r - 36*F0*F2 - 15*F1^2 + 66*F1*F2*r - 36*F2^2*r^2"
     " + 40*J2 - 80*J3*r + 80*J4*r^2)"),
    ("T2.C9", "73",
     "60*F0_x - (60*F0_y*r - 51*F0*F1 + 66*F0*F2*r + 36*F1^2*r - 72*F1*F2*r^2"
     " + 36*F2^2*r^3 + 60*J1 - 80*J2*r + 80*J3*r^2 - 80*J4*r^3)"),
    ("T2.C10", "74",
     "20*J0 - (9*F0^2 - 18*F0*F1*r + 18*F0*F2*r^2 + 9*F1^2*r^2 - 18*F1*F2*r^3"
     " + 9*F2^2*r^4 + 20*J1*r - 20*J2*r^2 + 20*J3*r^3 - 20*J4*r^4)"),
    ("T2.C11", "75",
     "120*J3_yy - (216*F1_y*F2_y + 54*F1_y*F2^2 - 48*F1_y*J4 + 360*F2_yy*r_y"
     " + 90*F2_yy*F1 - 180*F2_yy*F2*r - 432*F2_y^2*r + 324*F2_y*r_y*F2"
     " + 189*F2_y*F1*F2 - 486*F2_y*F2^2*r - 192*F2_y*J3 + 864*F2_y*J4*r"
     " - 60*J3_y*F2 + 720*J4_xy + 180*J4_x*F2 - 240*J4_yy*r - 1200*J4_y*r_y"
     " + 60*J4_y*F2*r + 720*K6_x - 720*K6_y*r - 5040*K7_x*r + 5040*K7_y*r^2"
     " + 36*r_y*F2^3 - 432*r_y*F2*J4 - 2160*r_y*K6 + 15120*r_y*K7*r"
     " + 504*F0*K7 + 36*F1*F2^3 - 102*F1*F2*J4 - 504*F1*K7*r - 72*F2^4*r"
     " - 48*F2^2*J3 + 396*F2^2*J4*r + 504*F2*K7*r^2 + 136*J3*J4 - 544*J4^2*r)"),
    ("T2.C12", "76",
     "240*J4_xyy + (36*F1_y*F2_yy + 162*F1_y*F2_y*F2 - 72*F1_y*J4_y + 36*F1_y*F2^3"
     " - 168*F1_y*F2*J4 - 72*F1_y*K6 - 168*F1_y*K7*r - 72*F2_yy*F2_y*r"
     " + 144*F2_yy*r_y*F2 + 54*F2_yy*F1*F2 - 108*F2_yy*F2^2*r - 72*F2_yy*J3"
     " + 288*F2_yy*J4*r + 432*F2_y^2*r_y + 108*F2_y^2*F1 - 540*F2_y^2*F2*r"
     " - 144*F2_y*J3_y + 528*F2_y*J4_x + 192*F2_y*J4_y*r + 324*F2_y*r_y*F2^2"
     " - 1008*F2_y*r_y*J4 + 162*F2_y*F1*F2^2 - 132*F2_y*F1*J4 - 396*F2_y*F2^3*r"
     " - 180*F2_y*F2*J3 + 1320*F2_y*F2*J4*r + 144*F2_y*K6*r - 336*F2_y*K7*r^2"
     " - 36*J3_y*F2^2 + 176*J3_y*J4 + 120*J4_xy*F2 + 132*J4_x*F2^2"
     " - 432*J4_x*J4 - 240*J4_yyy*r - 960*J4_yy*r_y - 120*J4_yy*F2*r"
     " - 768*J4_y*r_y*F2 - 138*J4_y*F1*F2 + 288*J4_y*F2^2*r + 184*J4_y*J3"
     " - 1008*J4_y*J4*r + 960*K6_xy + 240*K6_x*F2 - 960*K6_yy*r"
     " - 3840*K6_y*r_y - 240*K6_y*F2*r - 1920*K7_xy*r - 2400*K7_xx"
     " + 2880*K7_x*r_y - 600*K7_x*F1 - 480*K7_x*F2*r + 4320*K7_yy*r^2"
     " + 24000*K7_y*r_y*r + 432*K7_y*F0 + 168*K7_y*F1*r + 912*K7_y*F2*r^2"
     " + 20160*r_y^2*K7 + 1728*r_y*F1*K7 + 36*r_y*F2^4 - 264*r_y*F2^2*J4"
     " - 1248*r_y*F2*K6 + 5280*r_y*F2*K7*r + 160*r_y*J4^2 + 408*F0*F2*K7"
     " + 150*F1^2*K7 + 27*F1*F2^4 - 120*F1*F2^2*J4 - 168*F1*F2*K6"
     " + 168*F1*F2*K7*r - 54*F2^5*r - 36*F2^3*J3 + 384*F2^3*J4*r"
     " + 336*F2^2*K6*r - 1344*F2^2*K7*r^2 + 160*F2*J3*J4 - 640*F2*J4^2*r"
     " - 400*J2*K7 + 224*J3*K6 - 368*J3*K7*r - 896*J4*K6*r + 3872*J4*K7*r^2"
     " + 672*F0_y*K7)"),
    ("T2.C13", "77",
     "4*J4_x - (4*J4_y*r - F1*J4 + 2*F2*J4*r - 4*K5 + 24*K6*r - 84*K7*r^2)"),
    ("T2.C14", "78",
     "60*F0_yy + (30*F0_y*F2 + 36*F1_y*F1 - 36*F1_y*F2*r - 60*F2_yy*r^2"
     " + 24*F2_y*F0 - 36*F2_y*F1*r - 54*F2_y*F2*r^2 - 40*J2_y + 40*J3_y*r"
     " + 80*J4_y*r^2 - 36*r_y*F1*F2 + 36*r_y*F2^2*r + 40*r_y*J3 - 80*r_y*J4*r"
     " + 6*F0*F2^2 - 6*F0*J4 + 9*F1^2*F2 - 18*F1*F2^2*r - 12*F1*J3"
     " + 24*F1*J4*r - 6*F2^3*r^2 - 10*F2*J2 + 22*F2*J3*r + 26*F2*J4*r^2"
     " - 60*K4 + 180*K5*r - 180*K6*r^2 - 420*K7*r^3)"),
    ("T2.C15", "79",
     "20*J2_x - (20*J2_y*r + 20*J3_x*r - 20*J3_y*r^2 - 14*F0*J3 + 28*F0*J4*r"
     " - 5*F1*J2 + 19*F1*J3*r - 28*F1*J4*r^2 + 10*F2*J2*r - 24*F2*J3*r^2"
     " + 28*F2*J4*r^3 - 120*K3 + 360*K4*r - 640*K5*r^2 + 840*K6*r^3"
     " - 840*K7*r^4)"),
    ("T2.C16", "80",
     "60*J1_x - (60*J1_y*r - 40*J3_x*r^2 + 40*J3_y*r^3 - 42*F0*J2 + 42*F0*J3*r"
     " - 70*F0*J4*r^2 - 15*F1*J1 + 42*F1*J2*r - 52*F1*J3*r^2 + 70*F1*J4*r^3"
     " + 30*F2*J1*r - 42*F2*J2*r^2 + 62*F2*J3*r^3 - 70*F2*J4*r^4 - 600*K2"
     " + 1080*K3*r - 1380*K4*r^2 + 1700*K5*r^3 - 2100*K6*r^4 + 2100*K7*r^5)"),
    ("T2.C17", "81",
     "80*K1 - (3*F0^2*F1 - 6*F0^2*F2*r - 6*F0*F1^2*r + 18*F0*F1*F2*r^2"
     " - 12*F0*F2^2*r^3 - 8*F0*J1 + 16*F0*J2*r - 24*F0*J3*r^2 + 32*F0*J4*r^3"
     " + 3*F1^3*r^2 - 12*F1^2*F2*r^3 + 15*F1*F2^2*r^4 + 8*F1*J1*r"
     " - 16*F1*J2*r^2 + 24*F1*J3*r^3 - 32*F1*J4*r^4 - 6*F2^3*r^5"
     " - 8*F2*J1*r^2 + 16*F2*J2*r^3 - 24*F2*J3*r^4 + 32*F2*J4*r^5 + 160*K2*r"
     " - 240*K3*r^2 + 320*K4*r^3 - 400*K5*r^4 + 480*K6*r^5 - 560*K7*r^6)"),
    ("T2.C18", "82",
     "400*K0 + (6*F0^3 - 33*F0^2*F1*r + 48*F0^2*F2*r^2 + 48*F0*F1^2*r^2"
     " - 126*F0*F1*F2*r^3 + 78*F0*F2^2*r^4 + 40*F0*J1*r - 80*F0*J2*r^2"
     " + 120*F0*J3*r^3 - 160*F0*J4*r^4 - 21*F1^3*r^3 + 78*F1^2*F2*r^4"
     " - 93*F1*F2^2*r^5 - 40*F1*J1*r^2 + 80*F1*J2*r^3 - 120*F1*J3*r^4"
     " + 160*F1*J4*r^5 + 36*F2^3*r^6 + 40*F2*J1*r^3 - 80*F2*J2*r^4"
     " + 120*F2*J3*r^5 - 160*F2*J4*r^6 - 400*K2*r^2 + 800*K3*r^3"
     " - 1200*K4*r^4 + 1600*K5*r^5 - 2000*K6*r^6 + 2400*K7*r^7)"),
]

# Candidate I target pieces; ``chi`` is phi_xx/phi_x and ``dphi`` is phi_x.
OMEGA = "A0^3 - 4*A0*C0 + 8*D1 - 8*C0_x + 6*A0_x*A0 + 4*A0_xx"
RICCATI_RHS = "8*C0 - 3*A0^2 - 12*A0_x"
ALPHA_I = "Omega/(8*dphi^3)"
BETA_I = (
    "(-144*A0_x^2 - 72*A0_x*A0^2 + 352*A0_x*C0 + 160*C0_xx + 80*C0_x*A0"
    " + 1600*D0_y - 640*D1_x + 80*Omega_x - 9*A0^4 + 88*A0^2*C0 - 160*A0*D1"
    " - 30*A0*Omega + 400*A1*D0 - 300*chi*Omega - 144*C0^2)/(1600*dphi^4)"
)
# Coefficients of the fourth-order linear equation for psi, written as
# 1600*psi_xxxx = P3*psi_xxx + P2*psi_xx + P1*psi_x + P0*psi + PY*psi_y.
PSI_EQ_I = {
    "P3": "9600*chi",
    "P2": "160*(-12*A0_x - 3*A0^2 - 90*chi^2 + 8*C0)",
    "P1": "40*(12*A0_x*A0 + 72*A0_x*chi - 16*C0_x + 3*A0^3 + 18*A0^2*chi"
          " - 12*A0*C0 + 120*chi^3 - 48*chi*C0 + 24*D1 - 8*Omega)",
    "P0": "144*A0_x^2 + 72*A0_x*A0^2 - 352*A0_x*C0 - 160*C0_xx - 80*C0_x*A0"
          " - 1600*D0_y + 640*D1_x - 80*Omega_x + 9*A0^4 - 88*A0^2*C0"
          " + 160*A0*D1 + 30*A0*Omega - 400*A1*D0 + 300*chi*Omega + 144*C0^2",
    "PY": "1600*D0",
}

# Candidate II target pieces; ``dphi`` is phi_y here.
THETA = "(F2^2 - 4*J4)*F2 - 8*(K6 - 7*K7*r) - 8*J4_y + 6*F2_y*F2 + 4*F2_yy"
ALPHA_II = "Theta/(8*dphi^3)"
BETA_II = (
    "(Delta*(-144*F2_y^2 - 72*F2_y*F2^2 + 352*F2_y*J4 + 160*J4_yy + 80*J4_y*F2"
    " + 640*K6_y - 1600*K7_x - 2880*K7_y*r + 80*Theta_y - 4480*r_y*K7"
    " - 400*F1*K7 - 9*F2^4 + 88*F2^2*J4 + 160*F2*K6 - 320*F2*K7*r - 144*J4^2)"
    " - 120*Delta_y*Theta)/(1600*Delta*dphi^4)"
)
# Construction relations for the second candidate.
DELTA_X = "(20*r_y*Delta + 4*Delta_y*r + F1*Delta - 2*F2*r*Delta)/4"
DELTA_YY = ("-(20*F2_y*Delta^2 - 48*Delta_y^2 + 4*Delta_y*F2*Delta + 7*F2^2*Delta^2"
            " - 20*J4*Delta^2)/(40*Delta)")
PHI_YY = "dphi*(4*Delta_y - F2*Delta)/(10*Delta)"
PSI_YYYY = (
    "(300*psi_yyy*dphi*Delta^2*(4*Delta_y - F2*Delta)"
    " + 5*psi_yy*dphi*Delta*(-120*F2_y*Delta^2 - 144*Delta_y^2"
    " + 72*Delta_y*F2*Delta - 39*F2^2*Delta^2 + 80*J4*Delta^2)"
    " + psi_y*dphi*(-500*dphi^3*alpha*Delta^3 - 150*F2_yy*Delta^3"
    " + 360*F2_y*Delta_y*Delta^2 - 165*F2_y*F2*Delta^3 + 100*J4_y*Delta^3"
    " + 96*Delta_y^3 - 72*Delta_y^2*F2*Delta + 108*Delta_y*F2^2*Delta^2"
    " - 240*Delta_y*J4*Delta^2 - 24*F2^3*Delta^3 + 60*F2*J4*Delta^3)"
    " - 500*psi*dphi^5*beta*Delta^3 + 500*K7*Delta^4)/(500*dphi*Delta^3)"
)
