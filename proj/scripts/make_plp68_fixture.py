#!/usr/bin/env python3
"""Writes data/plp68.json.

Statutory structure: zero rate, reference rate, 40% and 70% fractions,
specific-regime effective rates, selective excise rates, rent regime with a
R$400 reducer. Baseline (pre-reform) effective rates and the synthetic Engel
parameters are illustrative fixture values, not survey estimates.
"""
import json
import pathlib

def inside(v):
    return {"value": v, "basis": "inside"}

def outside(v):
    return {"value": v, "basis": "outside"}

def cat(id, label, group, treatment, baseline, share, slope, participation=1.0,
        cashback="standard", in_denominator=True):
    c = {
        "id": id,
        "label": label,
        "group": group,
        "treatment": treatment,
        "cashback_class": cashback,
        "in_denominator": in_denominator,
        "baseline_effective": baseline,
        "synthetic": {"share": share, "slope": slope, "participation": participation},
    }
    return c

ZERO = {"kind": "zero_rate"}
REF = {"kind": "reference_rate"}
R40 = {"kind": "reduced_fraction", "fraction": 0.4}
R70 = {"kind": "reduced_fraction", "fraction": 0.7}

def specific(v):
    return {"kind": "specific_regime", "effective": inside(v)}

def selective(v):
    return {"kind": "selective", "excise_rate": outside(v), "vat_fraction": 1.0}

categories = [
    cat("cesta_basica", "Staple food basket", "cesta_basica", ZERO, inside(0.10), 0.100, -0.55),
    cat("hortifruti_ovos", "Vegetables, fruit and eggs", "cesta_basica", ZERO, inside(0.06), 0.025, -0.30),
    cat("medicamentos", "Zero-rated medicines", "outras_aliquota_zero", ZERO, inside(0.22), 0.030, -0.30),
    cat("transporte_urbano", "Urban public transport", "outras_aliquota_zero", ZERO, inside(0.08), 0.030, -0.50, 0.7),
    cat("outros_aliquota_zero", "Books, plants, menstrual care", "outras_aliquota_zero", ZERO, inside(0.12), 0.010, -0.10),

    cat("alimentos_outros", "Other food", "aliquota_referencia", REF, inside(0.20), 0.120, -0.15),
    cat("vestuario_calcados", "Clothing and footwear", "aliquota_referencia", REF, inside(0.24), 0.060, 0.00),
    cat("bens_duraveis", "Household durables", "aliquota_referencia", REF, inside(0.25), 0.070, 0.05),
    cat("telecomunicacoes", "Telecommunications", "aliquota_referencia", REF, outside(0.42), 0.050, -0.10),
    cat("energia_eletrica", "Electricity", "aliquota_referencia", REF, outside(0.51), 0.050, -0.30,
        cashback="utility_enhanced"),
    cat("agua_esgoto", "Water and sewage", "aliquota_referencia", REF, inside(0.05), 0.020, -0.30,
        cashback="utility_enhanced"),
    cat("gas_botijao", "Bottled and piped gas", "aliquota_referencia", REF, inside(0.15), 0.020, -0.50,
        cashback="utility_enhanced"),
    cat("outros_bens_servicos", "Other goods and services", "aliquota_referencia", REF, inside(0.14), 0.090, 0.00),

    cat("alimentos_reduzidos", "Reduced-rate food", "reduzida_40", R40, inside(0.14), 0.030, -0.05),
    cat("educacao", "Education", "reduzida_40", R40, inside(0.06), 0.030, 0.40, 0.5),
    cat("servicos_saude", "Health services", "reduzida_40", R40, inside(0.08), 0.025, 0.35),
    cat("planos_saude", "Health insurance plans", "reduzida_40", R40, inside(0.07), 0.020, 0.60, 0.4),
    cat("higiene_pessoal", "Personal hygiene basics", "reduzida_40", R40, inside(0.22), 0.020, -0.10),
    cat("cultura_esporte", "Culture and sport", "reduzida_40", R40, inside(0.10), 0.010, 0.50),

    cat("servicos_intelectuais", "Professional services", "reduzida_70", R70, inside(0.08), 0.005, 0.80, 0.4),

    cat("aluguel", "Residential rent", "aluguel", {"kind": "rent_regime", "fraction": 0.4, "reducer": 400.0},
        inside(0.06), 0.080, 0.10, 0.25),

    cat("gasolina", "Gasoline", "regime_especifico", specific(0.33), inside(0.33), 0.040, 0.30),
    cat("outros_combustiveis", "Other refined fuels and ethanol", "regime_especifico", specific(0.27),
        inside(0.27), 0.015, 0.10),
    cat("servicos_financeiros", "Financial services", "regime_especifico", specific(0.18), inside(0.18), 0.020, 0.30),
    cat("bares_restaurantes", "Bars and restaurants", "regime_especifico", specific(0.14), inside(0.14), 0.045, 0.30),
    cat("hotelaria_turismo", "Hotels, parks and travel agencies", "regime_especifico", specific(0.14),
        inside(0.14), 0.010, 0.60),
    cat("transporte_intermunicipal", "Intercity public transport", "regime_especifico", specific(0.20),
        inside(0.20), 0.010, 0.10),

    cat("bebidas_alcoolicas", "Alcoholic beverages", "imposto_seletivo", selective(0.19), inside(0.40), 0.020, 0.30,
        cashback="excluded"),
    cat("produtos_fumigenos", "Tobacco products", "imposto_seletivo", selective(0.19), inside(0.60), 0.008, -0.20,
        cashback="excluded"),
    cat("veiculos_embarcacoes", "Vehicles and boats", "imposto_seletivo", selective(0.05), inside(0.30), 0.050, 0.80,
        cashback="excluded"),
    cat("bebidas_acucaradas", "Sugary drinks", "imposto_seletivo", selective(0.03), inside(0.25), 0.010, 0.00,
        cashback="excluded"),
    cat("apostas_loterias", "Betting and lotteries", "imposto_seletivo", selective(0.15), inside(0.20), 0.005, 0.30,
        cashback="excluded"),

    cat("servicos_domesticos", "Domestic services", "servicos_domesticos", {"kind": "untaxed"}, inside(0.0),
        0.030, 0.80, 0.2),
]

def members(group):
    return [c["id"] for c in categories if c["group"] == group]

schedule = {
    "name": "plp68",
    "categories": categories,
    "cashback": {"utility_refund_share": 0.466, "standard_refund_share": 0.20},
    "eligibility_threshold": 477.0,
    "target_net_burden": 0.201,
    "removal_groups": [
        {"id": "cesta_basica", "label": "food-basket exemption", "categories": members("cesta_basica")},
        {"id": "medicamentos_transporte", "label": "zero rate on medicines and urban transport",
         "categories": ["medicamentos", "transporte_urbano"]},
        {"id": "reduzida_40", "label": "40% reduced rate", "categories": members("reduzida_40")},
        {"id": "reduzida_70", "label": "70% reduced rate", "categories": members("reduzida_70")},
        {"id": "bares_hotelaria_turismo", "label": "specific regime for restaurants, hotels and tourism",
         "categories": ["bares_restaurantes", "hotelaria_turismo"]},
        {"id": "imposto_seletivo", "label": "selective excise", "categories": members("imposto_seletivo")},
    ],
}

out = pathlib.Path(__file__).resolve().parent.parent / "data" / "plp68.json"
out.write_text(json.dumps(schedule, indent=2) + "\n")
