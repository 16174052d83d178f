"""Print the parity checker's state table in logical and physical modes.

The physical table shows the observables each row was thresholded from.
"""
import argparse

from blochfsm.logic import state_table


def main():
    argparse.ArgumentParser(description=__doc__.splitlines()[0]).parse_args()
    print("PS PI | NS PO | logical")
    for r in state_table("logical"):
        print(f" {r.present_state}  {r.present_input} |  {r.next_state}  {r.present_output} |")
    print("\nPS PI | NS PO |   rho11  coherence  (physical)")
    for r in state_table("physical"):
        o = r.observables
        print(f" {r.present_state}  {r.present_input} |  {r.next_state}  {r.present_output} | "
              f"{o['rho11']:.5f}  {o['coherence']:.5f}")


if __name__ == "__main__":
    main()
