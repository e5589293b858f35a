"""Characteristic sets of operators between L_p spaces."""
