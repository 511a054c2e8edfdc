"""Smoke test for the Python bindings.

Build first:  pip install --no-build-isolation -e crates/heun-painleve-py
"""

import heun_painleve_py as hp

AIRY = "sigma = 1; tau = 0; eta = -z"
SECOND = "param alpha, c; time t; sigma = 1; tau = -2*z^2 - t; eta = -(2*alpha+1)*z - c"


def main():
    r = hp.classify(AIRY)
    assert r["symbol"] == "(;5/2)", r["symbol"]
    assert r["riemann_reducible"]

    r = hp.indices("sigma = z*(z-1); tau = 1 - 2*z; eta = 0", "0")
    assert sorted(r["indices"]) == ["0", "2"], r["indices"]

    r = hp.deform(SECOND, "1/2", "3")
    assert r["apparency"]["apparent"]

    r = hp.derive(SECOND, "Bp")
    assert r["command"] == "derive"

    assert len(hp.catalog()["entries"]) == 11
    assert hp.catalog("I")["entries"][0]["type"] == "I"

    r = hp.verify_catalog()
    print(f"verify-catalog: {r['passed']}/{r['total']}")

    r = hp.integrate("II", (0.0, 0.0, 0.0), 1.0, params={"alpha": 1.0})
    assert r["termination"] == "completed"
    t, lam, mu = r["samples"][-1]
    assert abs(t - 1.0) < 1e-12
    # lambda' = mu - lambda^2 - t/2 vanishes at the origin
    direct = hp.integrate("II", (0.0, 0.0, 0.0), 1.0, params={"alpha": 1.0}, second_order=True)
    assert abs(direct["samples"][-1][1] - lam) < 1e-7, (lam, direct["samples"][-1])

    code, out, err = hp.run(["catalog", "--type", "XIV"])
    assert code == 2 and out == "" and err

    try:
        hp.classify("sigma = z; eta = 1/0")
    except ValueError:
        pass
    else:
        raise AssertionError("bad spec accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
