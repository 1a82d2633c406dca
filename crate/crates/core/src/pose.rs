//! Reference poses and world/local frame transforms.

use crate::geometry::Vec3;

/// Vehicle pose defining the local label frame. The planar fields are always
/// present; z, roll and pitch are optional and default to 0, so a 3 degree-of-freedom
/// pose is the minimum. The transform code path is shared between both forms, which
/// makes a 6-DoF pose with z = roll = pitch = 0 produce bit-identical results to the
/// 3-DoF pose.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ReferencePose {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
    pub z: Option<f64>,
    pub roll: Option<f64>,
    pub pitch: Option<f64>,
}

impl ReferencePose {
    pub fn planar(x: f64, y: f64, yaw: f64) -> Self {
        ReferencePose { x, y, yaw, z: None, roll: None, pitch: None }
    }

    pub fn full(x: f64, y: f64, z: f64, roll: f64, pitch: f64, yaw: f64) -> Self {
        ReferencePose { x, y, yaw, z: Some(z), roll: Some(roll), pitch: Some(pitch) }
    }

    pub fn z_or_zero(&self) -> f64 {
        self.z.unwrap_or(0.0)
    }

    pub fn roll_or_zero(&self) -> f64 {
        self.roll.unwrap_or(0.0)
    }

    pub fn pitch_or_zero(&self) -> f64 {
        self.pitch.unwrap_or(0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.yaw.is_finite()
            && self.z_or_zero().is_finite()
            && self.roll_or_zero().is_finite()
            && self.pitch_or_zero().is_finite()
    }

    fn rotation(&self) -> [[f64; 3]; 3] {
        let (sy, cy) = self.yaw.sin_cos();
        let (sp, cp) = self.pitch_or_zero().sin_cos();
        let (sr, cr) = self.roll_or_zero().sin_cos();
        // R = Rz(yaw) * Ry(pitch) * Rx(roll). For roll = pitch = 0 every mixed term
        // multiplies by an exact 0.0 or 1.0, so the planar case stays exact.
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    }

    fn translation(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z_or_zero())
    }

    /// World point into the pose's local frame: p_local = R^T * (p_world - t). The
    /// local x axis points along the vehicle heading.
    pub fn world_to_local(&self, p: Vec3) -> Vec3 {
        let r = self.rotation();
        let d = p.sub(self.translation());
        Vec3::new(
            r[0][0] * d.x + r[1][0] * d.y + r[2][0] * d.z,
            r[0][1] * d.x + r[1][1] * d.y + r[2][1] * d.z,
            r[0][2] * d.x + r[1][2] * d.y + r[2][2] * d.z,
        )
    }

    /// Inverse of [`ReferencePose::world_to_local`].
    pub fn local_to_world(&self, p: Vec3) -> Vec3 {
        let r = self.rotation();
        let rotated = Vec3::new(
            r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z,
            r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z,
            r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z,
        );
        rotated.add(self.translation())
    }

    /// Parses "x,y,yaw" or "x,y,yaw,z,roll,pitch" with optional whitespace around
    /// the comma-separated fields.
    pub fn parse_fields(s: &str) -> Result<Self, String> {
        let fields: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums: Result<Vec<f64>, String> = fields
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| format!("invalid number '{f}' in pose '{s}'")))
            .collect();
        let nums = nums?;
        let pose = match nums.len() {
            3 => ReferencePose::planar(nums[0], nums[1], nums[2]),
            6 => ReferencePose::full(nums[0], nums[1], nums[3], nums[4], nums[5], nums[2]),
            n => return Err(format!("pose '{s}' has {n} fields, expected 3 (x,y,yaw) or 6 (x,y,yaw,z,roll,pitch)")),
        };
        if !pose.is_finite() {
            return Err(format!("pose '{s}' has non-finite fields"));
        }
        Ok(pose)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_pose_is_identity() {
        let pose = ReferencePose::planar(0.0, 0.0, 0.0);
        let p = Vec3::new(1.0, 2.0, 0.0);
        assert_eq!(pose.world_to_local(p), p);
    }

    #[test]
    fn quarter_turn() {
        let pose = ReferencePose::planar(0.0, 0.0, std::f64::consts::FRAC_PI_2);
        let out = pose.world_to_local(Vec3::new(1.0, 0.0, 0.0));
        assert!(out.dist(Vec3::new(0.0, -1.0, 0.0)) < 1e-12, "{out:?}");
    }

    #[test]
    fn translation_only() {
        let pose = ReferencePose::full(5.0, 5.0, 1.0, 0.0, 0.0, 0.0);
        let out = pose.world_to_local(Vec3::new(5.0, 5.0, 1.0));
        assert_eq!(out, Vec3::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn planar_pose_passes_z_through() {
        let pose = ReferencePose::planar(2.0, 3.0, 1.1);
        let out = pose.world_to_local(Vec3::new(7.0, -4.0, 2.5));
        assert_eq!(out.z, 2.5);
    }

    #[test]
    fn parse_pose_fields() {
        assert_eq!(ReferencePose::parse_fields("1,2,0.5").unwrap(), ReferencePose::planar(1.0, 2.0, 0.5));
        assert_eq!(
            ReferencePose::parse_fields(" 1, 2, 0.5, 3, 0.1, 0.2 ").unwrap(),
            ReferencePose::full(1.0, 2.0, 3.0, 0.1, 0.2, 0.5)
        );
        assert!(ReferencePose::parse_fields("1,2").is_err());
        assert!(ReferencePose::parse_fields("1,2,0.5,3").is_err());
        assert!(ReferencePose::parse_fields("1,2,abc").is_err());
        assert!(ReferencePose::parse_fields("1,2,nan").is_err());
    }

    proptest! {
        // The 6-DoF code path with zeroed extra fields must be bitwise identical to
        // the 3-DoF one.
        #[test]
        fn planar_equals_zeroed_full(
            x in -1e4f64..1e4, y in -1e4f64..1e4, yaw in -7.0f64..7.0,
            px in -1e4f64..1e4, py in -1e4f64..1e4, pz in -100.0f64..100.0,
        ) {
            let a = ReferencePose::planar(x, y, yaw);
            let b = ReferencePose::full(x, y, 0.0, 0.0, 0.0, yaw);
            let p = Vec3::new(px, py, pz);
            let (pa, pb) = (a.world_to_local(p), b.world_to_local(p));
            prop_assert_eq!(pa.x.to_bits(), pb.x.to_bits());
            prop_assert_eq!(pa.y.to_bits(), pb.y.to_bits());
            prop_assert_eq!(pa.z.to_bits(), pb.z.to_bits());
        }

        #[test]
        fn round_trip_world_local(
            x in -1e3f64..1e3, y in -1e3f64..1e3, z in -50.0f64..50.0,
            roll in -0.5f64..0.5, pitch in -0.5f64..0.5, yaw in -7.0f64..7.0,
            px in -1e3f64..1e3, py in -1e3f64..1e3, pz in -50.0f64..50.0,
        ) {
            let pose = ReferencePose::full(x, y, z, roll, pitch, yaw);
            let p = Vec3::new(px, py, pz);
            let back = pose.local_to_world(pose.world_to_local(p));
            prop_assert!(back.dist(p) < 1e-9, "{:?} vs {:?}", back, p);
        }

        #[test]
        fn rotation_preserves_distances(
            yaw in -7.0f64..7.0, roll in -1.0f64..1.0, pitch in -1.0f64..1.0,
            ax in -100.0f64..100.0, ay in -100.0f64..100.0, az in -100.0f64..100.0,
            bx in -100.0f64..100.0, by in -100.0f64..100.0, bz in -100.0f64..100.0,
        ) {
            let pose = ReferencePose::full(3.0, -2.0, 1.0, roll, pitch, yaw);
            let a = Vec3::new(ax, ay, az);
            let b = Vec3::new(bx, by, bz);
            let d0 = a.dist(b);
            let d1 = pose.world_to_local(a).dist(pose.world_to_local(b));
            prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0));
        }
    }
}
