"""Forward coefficient formulas, written in the package expression grammar.

Identifiers ``name_xy...`` denote partial derivatives of ``name``.  ``Delta``
is the Jacobian phi_x*psi_y - phi_y*psi_x and ``r`` is phi_x/phi_y.
``alpha`` and ``beta`` are the target coefficients already composed with phi.
"""

CANDIDATE_I = {
    "A1": "4*psi_yy/psi_y",
    "A0": "-2*(3*phi_xx*psi_y - 2*phi_x*psi_xy)/(phi_x*psi_y)",
    "B0": "3*psi_yy/psi_y",
    "C2": "6*psi_yyy/psi_y",
    "C1": "-6*(3*phi_xx*psi_yy - 2*phi_x*psi_xyy)/(phi_x*psi_y)",
    "C0": "-((4*phi_xxx*phi_x - 15*phi_xx^2)*psi_y"
          " + 6*(3*phi_xx*psi_xy - phi_x*psi_xxy)*phi_x)/(phi_x^2*psi_y)",
    "D4": "psi_yyyy/psi_y",
    "D3": "-2*(3*phi_xx*psi_yyy - 2*phi_x*psi_xyyy)/(phi_x*psi_y)",
    "D2": "-(4*phi_xxx*phi_x*psi_yy - 15*phi_xx^2*psi_yy + 18*phi_xx*phi_x*psi_xyy"
          " - 6*phi_x^2*psi_xxyy)/(phi_x^2*psi_y)",
    "D1": "-(3*(5*phi_xx^2*psi_y - 10*phi_xx*phi_x*psi_xy + 6*phi_x^2*psi_xxy)*phi_xx"
          " - (phi_x^3*psi_y*alpha + 4*psi_xxxy)*phi_x^3"
          " - 2*(5*phi_xx*psi_y - 4*phi_x*psi_xy)*phi_xxx*phi_x"
          " + phi_xxxx*phi_x^2*psi_y)/(phi_x^3*psi_y)",
    "D0": "-((15*phi_xx^3 - phi_x^6*alpha + phi_xxxx*phi_x^2)*psi_x"
          " - (10*phi_xxx*phi_xx*psi_x - 4*phi_xxx*phi_x*psi_xx + 15*phi_xx^2*psi_xx"
          " - 6*phi_xx*phi_x*psi_xxx + phi_x^6*beta*psi + phi_x^2*psi_xxxx)*phi_x)"
          "/(phi_x^3*psi_y)",
}

CANDIDATE_II = {
    "F2": "-2*(5*phi_yy*Delta - 2*phi_y*Delta_y)/(phi_y*Delta)",
    "F1": "4*((Delta_x + Delta_y*r - 5*r_y*Delta)*phi_y - 5*phi_yy*r*Delta)/(phi_y*Delta)",
    "F0": "-2*(((5*r_y*Delta - 2*Delta_x)*r + 5*r_x*Delta)*phi_y"
          " + 5*phi_yy*r^2*Delta)/(phi_y*Delta)",
    "H2": "6*(5*phi_yy*Delta - 2*phi_y*Delta_y)/(phi_y*Delta)",
    "H1": "-3*((5*Delta_x + 3*Delta_y*r - 25*r_y*Delta)*phi_y"
          " - 20*phi_yy*r*Delta)/(phi_y*Delta)",
    "H0": "3*((5*(3*r_x + 2*r_y*r)*Delta - (5*Delta_x - Delta_y*r)*r)*phi_y"
          " + 10*phi_yy*r^2*Delta)/(phi_y*Delta)",
    "J4": "-(10*phi_yyy*phi_y*Delta - 45*phi_yy^2*Delta + 30*phi_yy*phi_y*Delta_y"
          " - 6*phi_y^2*Delta_yy)/(phi_y^2*Delta)",
    "J3": "2*(3*((2*(Delta_xy + Delta_yy*r - 5*r_y*Delta_y) - 5*r_yy*Delta)*phi_y^2"
          " - 5*((Delta_x + 3*Delta_y*r - 4*r_y*Delta)*phi_y - 6*phi_yy*r*Delta)*phi_yy)"
          " - 20*phi_yyy*phi_y*r*Delta)/(phi_y^2*Delta)",
    "J2": "6*((Delta_xx + Delta_yy*r^2 + 4*Delta_xy*r"
          " - 5*(2*Delta_x + 3*Delta_y*r - 5*r_y*Delta)*r_y"
          " - 10*r_yy*r*Delta - 5*r_x*Delta_y - 5*r_xy*Delta)*phi_y^2"
          " - 5*(((3*(Delta_x + Delta_y*r) - 10*r_y*Delta)*r - 2*r_x*Delta)*phi_y"
          " - 9*phi_yy*r^2*Delta)*phi_yy - 10*phi_yyy*phi_y*r^2*Delta)/(phi_y^2*Delta)",
    "J1": "-2*(((5*(3*(3*Delta_x + Delta_y*r) - 14*r_y*Delta)*r_y"
          " - 6*(Delta_xy*r + Delta_xx) + 20*r_yy*r*Delta)*r"
          " + 5*(3*(Delta_x + Delta_y*r) - 16*r_y*Delta)*r_x + 5*r_xx*Delta"
          " + 20*r_xy*r*Delta)*phi_y^2"
          " + 15*(((3*Delta_x + Delta_y*r - 8*r_y*Delta)*r - 4*r_x*Delta)*phi_y"
          " - 6*phi_yy*r^2*Delta)*phi_yy*r"
          " + 20*phi_yyy*phi_y*r^3*Delta)/(phi_y^2*Delta)",
    "J0": "-(((2*((5*r_yy*r*Delta - 3*Delta_xx)*r + 5*r_xx*Delta + 5*r_xy*r*Delta)"
          " - 5*(7*r_y*Delta - 6*Delta_x)*r_y*r)*r"
          " - 5*(2*(7*r_y*Delta - 3*Delta_x)*r + 9*r_x*Delta)*r_x)*phi_y^2"
          " - 5*(3*(2*((2*r_y*Delta - Delta_x)*r + 2*r_x*Delta)*phi_y"
          " + 3*phi_yy*r^2*Delta)*phi_yy"
          " - 2*phi_yyy*phi_y*r^2*Delta)*r^2)/(phi_y^2*Delta)",
    "K7": "-(phi_yyyy*phi_y^2*psi_y - 10*phi_yyy*phi_yy*phi_y*psi_y"
          " + 4*phi_yyy*phi_y^2*psi_yy + 15*phi_yy^3*psi_y"
          " - 15*phi_yy^2*phi_y*psi_yy + 6*phi_yy*phi_y^2*psi_yyy"
          " - phi_y^7*beta*psi - phi_y^6*psi_y*alpha - phi_y^3*psi_yyyy)/(phi_y^2*Delta)",
    "K6": "(3*(5*((7*phi_y*psi_yy*r - 6*Delta_y)*phi_y"
          " - 7*(phi_y*psi_y*r - Delta)*phi_yy)*phi_yy"
          " - 2*(7*phi_y*psi_yyy*r - 5*Delta_yy)*phi_y^2)*phi_yy"
          " + (7*phi_y^5*beta*psi*r + 7*phi_y^4*psi_y*alpha*r - phi_y^3*alpha*Delta"
          " + 7*phi_y*psi_yyyy*r - 4*Delta_yyy)*phi_y^3"
          " + 2*(35*phi_yy*phi_y*psi_y*r - 30*phi_yy*Delta - 14*phi_y^2*psi_yy*r"
          " + 10*phi_y*Delta_y)*phi_yyy*phi_y"
          " - (7*phi_y*psi_y*r - 5*Delta)*phi_yyyy*phi_y^2)/(phi_y^3*Delta)",
    "K5": "-((2*(3*(Delta_xyy + 3*Delta_yyy*r - 5*r_y*Delta_yy - 5*r_yy*Delta_y)"
          " - 5*r_yyy*Delta)"
          " - 3*(7*phi_y^4*beta*psi*r + 7*phi_y^3*psi_y*alpha*r - 2*phi_y^2*alpha*Delta"
          " + 7*psi_yyyy*r)*phi_y*r)*phi_y^3"
          " - 3*(2*(5*(Delta_xy + 5*Delta_yy*r - 4*r_y*Delta_y - 2*r_yy*Delta)"
          " - 21*phi_y*psi_yyy*r^2)*phi_y^2"
          " - 15*((Delta_x + 11*Delta_y*r - 3*r_y*Delta - 7*phi_y*psi_yy*r^2)*phi_y"
          " + 7*(phi_y*psi_y*r - 2*Delta)*phi_yy*r)*phi_yy)*phi_yy"
          " - 2*((5*(Delta_x + 11*Delta_y*r - 3*r_y*Delta) - 42*phi_y*psi_yy*r^2)*phi_y"
          " + 15*(7*phi_y*psi_y*r - 12*Delta)*phi_yy*r)*phi_yyy*phi_y"
          " + 3*(7*phi_y*psi_y*r - 10*Delta)*phi_yyyy*phi_y^2*r)/(phi_y^3*Delta)",
    "K4": "-((2*(45*r_yy*r_y*Delta - 10*r_yy*Delta_x - 55*r_yy*Delta_y*r"
          " + 50*r_y^2*Delta_y - 20*r_y*Delta_xy - 50*r_y*Delta_yy*r + 11*Delta_xyy*r"
          " + 2*Delta_xxy + 17*Delta_yyy*r^2 - 20*r_yyy*r*Delta - 5*r_x*Delta_yy"
          " - 10*r_xy*Delta_y - 5*r_xyy*Delta)"
          " - 5*(7*phi_y^4*beta*psi*r + 7*phi_y^3*psi_y*alpha*r - 3*phi_y^2*alpha*Delta"
          " + 7*psi_yyyy*r)*phi_y*r^2)*phi_y^3"
          " + 15*((3*((5*(Delta_x + 5*Delta_y*r) - 14*r_y*Delta)*r - r_x*Delta)"
          " - 35*phi_y*psi_yy*r^3)*phi_y"
          " + 35*(phi_y*psi_y*r - 3*Delta)*phi_yy*r^2)*phi_yy^2"
          " - 10*(Delta_xx + 31*Delta_yy*r^2 + 13*Delta_xy*r"
          " - 8*(Delta_x + 6*Delta_y*r - 2*r_y*Delta)*r_y - 26*r_yy*r*Delta"
          " - 4*r_x*Delta_y - 4*r_xy*Delta - 21*phi_y*psi_yyy*r^3)*phi_yy*phi_y^2"
          " - 10*(((5*(Delta_x + 5*Delta_y*r) - 14*r_y*Delta)*r - r_x*Delta"
          " - 14*phi_y*psi_yy*r^3)*phi_y"
          " + 5*(7*phi_y*psi_y*r - 18*Delta)*phi_yy*r^2)*phi_yyy*phi_y"
          " + 5*(7*phi_y*psi_y*r - 15*Delta)*phi_yyyy*phi_y^2*r^2)/(phi_y^3*Delta)",
    "K3": "-(((13*Delta_xxy + 35*Delta_yyy*r^2)*r + Delta_xxx + 31*Delta_xyy*r^2"
          " - 5*(3*Delta_xx + 26*Delta_yy*r^2 + 23*Delta_xy*r"
          " - (15*Delta_x + 49*Delta_y*r - 25*r_y*Delta)*r_y)*r_y"
          " - 5*(13*Delta_x + 32*Delta_y*r - 50*r_y*Delta)*r_yy*r - 65*r_yyy*r^2*Delta"
          " - 5*(3*Delta_xy + 5*Delta_yy*r - 16*r_y*Delta_y - 7*r_yy*Delta)*r_x"
          " - 5*r_xx*Delta_y - 5*r_xxy*Delta"
          " - 5*(3*Delta_x + 11*Delta_y*r - 15*r_y*Delta)*r_xy - 30*r_xyy*r*Delta"
          " - 5*(7*phi_y^4*beta*psi*r + 7*phi_y^3*psi_y*alpha*r - 4*phi_y^2*alpha*Delta"
          " + 7*psi_yyyy*r)*phi_y*r^3)*phi_y^3"
          " - 5*(2*((2*(2*Delta_xx + 17*Delta_yy*r^2 + 11*Delta_xy*r)"
          " - (29*Delta_x + 75*Delta_y*r - 51*r_y*Delta)*r_y - 45*r_yy*r*Delta)*r"
          " - (3*Delta_x + 13*Delta_y*r - 13*r_y*Delta)*r_x - r_xx*Delta"
          " - 14*r_xy*r*Delta - 21*phi_y*psi_yyy*r^4)*phi_y^2"
          " - 3*((6*((5*(Delta_x + 3*Delta_y*r) - 13*r_y*Delta)*r - 2*r_x*Delta)"
          " - 35*phi_y*psi_yy*r^3)*phi_y"
          " + 35*(phi_y*psi_y*r - 4*Delta)*phi_yy*r^2)*phi_yy*r)*phi_yy"
          " - 10*(2*((5*(Delta_x + 3*Delta_y*r) - 13*r_y*Delta)*r - 2*r_x*Delta"
          " - 7*phi_y*psi_yy*r^3)*phi_y"
          " + 5*(7*phi_y*psi_y*r - 24*Delta)*phi_yy*r^2)*phi_yyy*phi_y*r"
          " + 5*(7*phi_y*psi_y*r - 20*Delta)*phi_yyyy*phi_y^2*r^3)/(phi_y^3*Delta)",
    "K2": "-(((3*((5*Delta_xxy + 7*Delta_yyy*r^2)*r + Delta_xxx + 7*Delta_xyy*r^2)"
          " - (3*(13*Delta_xx + 28*Delta_yy*r^2 + 39*Delta_xy*r)"
          " + (204*r_y*Delta - 161*Delta_x - 217*Delta_y*r)*r_y)*r_y"
          " - (79*Delta_x + 116*Delta_y*r - 264*r_y*Delta)*r_yy*r"
          " - 54*r_yyy*r^2*Delta)*r"
          " - (3*(2*Delta_xx + 7*Delta_yy*r^2 + 11*Delta_xy*r)"
          " + (171*r_y*Delta - 64*Delta_x - 140*Delta_y*r)*r_y"
          " - 72*r_yy*r*Delta - 18*r_x*Delta_y)*r_x"
          " - (4*Delta_x + 11*Delta_y*r - 21*r_y*Delta)*r_xx - 12*r_xxy*r*Delta"
          " - r_xxx*Delta - ((37*Delta_x + 53*Delta_y*r - 150*r_y*Delta)*r"
          " - 33*r_x*Delta)*r_xy - 33*r_xyy*r^2*Delta"
          " - 3*(7*phi_y^4*beta*psi*r + 7*phi_y^3*psi_y*alpha*r - 5*phi_y^2*alpha*Delta"
          " + 7*psi_yyyy*r)*phi_y*r^4)*phi_y^3"
          " - 3*(2*(5*((2*Delta_xx + 7*Delta_yy*r^2 + 6*Delta_xy*r"
          " - (13*Delta_x + 19*Delta_y*r - 20*r_y*Delta)*r_y - 13*r_yy*r*Delta)*r^2"
          " - ((3*Delta_x + 5*Delta_y*r - 11*r_y*Delta)*r - r_x*Delta)*r_x"
          " - r_xx*r*Delta - 6*r_xy*r^2*Delta) - 21*phi_y*psi_yyy*r^5)*phi_y^2"
          " - 15*((2*((5*(Delta_x + 2*Delta_y*r) - 12*r_y*Delta)*r - 3*r_x*Delta)"
          " - 7*phi_y*psi_yy*r^3)*phi_y"
          " + 7*(phi_y*psi_y*r - 5*Delta)*phi_yy*r^2)*phi_yy*r^2)*phi_yy"
          " - 2*(2*(5*((5*(Delta_x + 2*Delta_y*r) - 12*r_y*Delta)*r - 3*r_x*Delta)"
          " - 21*phi_y*psi_yy*r^3)*phi_y"
          " + 15*(7*phi_y*psi_y*r - 30*Delta)*phi_yy*r^2)*phi_yyy*phi_y*r^2"
          " + 3*(7*phi_y*psi_y*r - 25*Delta)*phi_yyyy*phi_y^2*r^4)/(phi_y^3*Delta)",
    "K1": "-(((7*(Delta_xxy + Delta_yyy*r^2)*r + 3*Delta_xxx + 7*Delta_xyy*r^2"
          " - (33*Delta_xx + 28*Delta_yy*r^2 + 49*Delta_xy*r"
          " + 2*(59*r_y*Delta - 56*Delta_x - 42*Delta_y*r)*r_y)*r_y"
          " - (43*Delta_x + 42*Delta_y*r - 128*r_y*Delta)*r_yy*r"
          " - 23*r_yyy*r^2*Delta)*r^2"
          " - ((12*Delta_xx + 7*Delta_yy*r^2 + 21*Delta_xy*r"
          " + 2*(86*r_y*Delta - 49*Delta_x - 35*Delta_y*r)*r_y - 49*r_yy*r*Delta)*r"
          " + (85*r_y*Delta - 15*Delta_x - 21*Delta_y*r)*r_x)*r_x"
          " - ((8*Delta_x + 7*Delta_y*r - 32*r_y*Delta)*r - 10*r_x*Delta)*r_xx"
          " - 9*r_xxy*r^2*Delta - 2*r_xxx*r*Delta"
          " - ((29*Delta_x + 21*Delta_y*r - 95*r_y*Delta)*r - 46*r_x*Delta)*r_xy*r"
          " - 16*r_xyy*r^3*Delta"
          " - (7*phi_y^4*beta*psi*r + 7*phi_y^3*psi_y*alpha*r - 6*phi_y^2*alpha*Delta"
          " + 7*psi_yyyy*r)*phi_y*r^5)*phi_y^3"
          " - (2*(5*((4*Delta_xx + 7*Delta_yy*r^2 + 7*Delta_xy*r"
          " - (23*Delta_x + 21*Delta_y*r - 31*r_y*Delta)*r_y - 17*r_yy*r*Delta)*r^2"
          " - ((9*Delta_x + 7*Delta_y*r - 27*r_y*Delta)*r - 6*r_x*Delta)*r_x"
          " - 3*r_xx*r*Delta - 10*r_xy*r^2*Delta) - 21*phi_y*psi_yyy*r^5)*phi_y^2"
          " - 15*((3*((5*Delta_x + 7*Delta_y*r - 11*r_y*Delta)*r - 4*r_x*Delta)"
          " - 7*phi_y*psi_yy*r^3)*phi_y"
          " + 7*(phi_y*psi_y*r - 6*Delta)*phi_yy*r^2)*phi_yy*r^2)*phi_yy*r"
          " - 2*((5*((5*Delta_x + 7*Delta_y*r - 11*r_y*Delta)*r - 4*r_x*Delta)"
          " - 14*phi_y*psi_yy*r^3)*phi_y"
          " + 5*(7*phi_y*psi_y*r - 36*Delta)*phi_yy*r^2)*phi_yyy*phi_y*r^3"
          " + (7*phi_y*psi_y*r - 30*Delta)*phi_yyyy*phi_y^2*r^5)/(phi_y^3*Delta)",
    "K0": "(((((2*(r_xxy + 2*r_yyy*r^2)*r + r_xxx + 3*r_xyy*r^2)*Delta"
          " + 3*(3*Delta_x + 2*Delta_y*r - 8*r_y*Delta)*r_yy*r^2)*r"
          " - ((10*r_x + 11*r_y*r)*Delta - (4*Delta_x + Delta_y*r)*r)*r_xx"
          " - ((13*r_x + 20*r_y*r)*Delta - (7*Delta_x + 3*Delta_y*r)*r)*r_xy*r"
          " + ((phi_y^4*beta*psi + phi_y^3*psi_y*alpha + psi_yyyy)*r"
          " - phi_y^2*alpha*Delta)*phi_y*r^5"
          " + (9*Delta_xx + 4*Delta_yy*r^2 + 7*Delta_xy*r"
          " - 2*(13*Delta_x + 6*Delta_y*r - 12*r_y*Delta)*r_y)*r_y*r^2"
          " - ((Delta_xxy + Delta_yyy*r^2)*r + Delta_xxx + Delta_xyy*r^2)*r^2)*r"
          " - ((2*((17*Delta_x + 5*Delta_y*r - 23*r_y*Delta)*r_y + 6*r_yy*r*Delta)"
          " - (6*Delta_xx + Delta_yy*r^2 + 3*Delta_xy*r))*r^2"
          " - (5*(3*r_x + 8*r_y*r)*Delta - 3*(5*Delta_x + Delta_y*r)*r)*r_x)*r_x)*phi_y^3"
          " - ((2*((5*(r_xx + 3*r_yy*r^2 + 2*r_xy*r)*Delta + 3*phi_y*psi_yyy*r^4"
          " + 5*(5*Delta_x + 3*Delta_y*r - 6*r_y*Delta)*r_y*r"
          " - 5*(Delta_xx + Delta_yy*r^2 + Delta_xy*r)*r)*r"
          " - 5*((3*r_x + 7*r_y*r)*Delta - (3*Delta_x + Delta_y*r)*r)*r_x)*phi_y^2"
          " - 15*((3*(r_x + 2*r_y*r)*Delta + phi_y*psi_yy*r^3"
          " - 3*(Delta_x + Delta_y*r)*r)*phi_y"
          " - (phi_y*psi_y*r - 7*Delta)*phi_yy*r^2)*phi_yy*r^2)*phi_yy"
          " + (2*((5*(r_x + 2*r_y*r)*Delta + 2*phi_y*psi_yy*r^3"
          " - 5*(Delta_x + Delta_y*r)*r)*phi_y"
          " - 5*(phi_y*psi_y*r - 6*Delta)*phi_yy*r^2)*phi_yyy"
          " + (phi_y*psi_y*r - 5*Delta)*phi_yyyy*phi_y*r^2)*phi_y*r^2)*r^2)"
          "/(phi_y^3*Delta)",
}
