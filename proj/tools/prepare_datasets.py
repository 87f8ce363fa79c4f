#!/usr/bin/env python3
"""Export the public PBC, colon and lung datasets (R package `survival`) as CSV.

Requires the `rdatasets` Python package (pip install rdatasets), which ships
the R datasets as pickles. Output files are written to ../data by default.

Encoding:
  * event = 1 for death, 0 otherwise (PBC transplant counts as censored)
  * PBC sex: m -> 1, f -> 0
  * colon rx: Obs -> 0, Lev -> 1, Lev+5FU -> 2
  * missing values are written as NA
"""
import argparse
import os

import rdatasets


def write(df, path):
    df.to_csv(path, index=False, na_rep="NA", float_format="%.10g")
    print(f"{path}: {df.shape[0]} rows, {df.shape[1] - 2} features")


def pbc(out):
    d = rdatasets.data("survival", "pbc")
    d = d.assign(event=(d.status == 2).astype(int),
                 sex=(d.sex == "m").astype(int))
    feats = ["trt", "age", "sex", "ascites", "hepato", "spiders", "edema",
             "bili", "chol", "albumin", "copper", "alk.phos", "ast", "trig",
             "platelet", "protime", "stage"]
    write(d[["time", "event"] + feats], os.path.join(out, "pbc.csv"))


def colon(out):
    d = rdatasets.data("survival", "colon")
    d = d.assign(rx=d.rx.map({"Obs": 0, "Lev": 1, "Lev+5FU": 2}))
    feats = ["rx", "sex", "age", "obstruct", "perfor", "adhere", "nodes",
             "differ", "extent", "surg", "node4"]
    for etype, name in [(2, "colon.csv"), (1, "colon_recurrence.csv")]:
        s = d[d.etype == etype].sort_values("id")
        s = s.assign(event=s.status.astype(int))
        write(s[["time", "event"] + feats], os.path.join(out, name))


def lung(out):
    d = rdatasets.data("survival", "cancer")
    d = d.assign(event=(d.status == 2).astype(int))
    feats = ["age", "sex", "ph.ecog", "ph.karno", "pat.karno", "meal.cal",
             "wt.loss"]
    write(d[["time", "event"] + feats], os.path.join(out, "lung.csv"))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default=os.path.join(os.path.dirname(__file__),
                                                 "..", "data"))
    args = p.parse_args()
    os.makedirs(args.out, exist_ok=True)
    pbc(args.out)
    colon(args.out)
    lung(args.out)


if __name__ == "__main__":
    main()
